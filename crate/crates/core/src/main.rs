fn main() -> std::process::ExitCode {
    nilmetric::cli::main()
}
