use std::path::Path;
use std::process::{Command, Output};

use nilmetric::exact_metric::read_ball;
use nilmetric::text::{parse_element_document, parse_word};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nilmetric"));
    cmd.args(args).env_remove("NILMETRIC_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn nf_examples() {
    let out = stdout(&run(&["nf", "--dim", "3", "--word", "a[1,2]^1 a[2,3]^1"]));
    assert_eq!(out.trim(), "a[1,3]^1 a[2,3]^1 a[1,2]^1");
    let out = stdout(&run(&["nf", "--element", r#"{"dim":4,"entries":[]}"#]));
    assert_eq!(out.trim(), "");
    let out = stdout(&run(&["nf", "--heisenberg", "2", "--word", "c^3"]));
    assert_eq!(out.trim(), "c^3");
    let out = stdout(&run(&[
        "nf",
        "--heisenberg",
        "2",
        "--element",
        r#"{"dim":4,"entries":[[1,4,3]]}"#,
    ]));
    assert_eq!(out.trim(), "c^3");
}

#[test]
fn nf_output_round_trips() {
    let word = "a[2,4]^7 a[1,2]^-3 a[3,4]^2 a[1,3]^5";
    let out = stdout(&run(&["nf", "--dim", "4", "--word", word]));
    let x = parse_word(word, None).unwrap().evaluate(4).unwrap();
    assert_eq!(
        parse_word(out.trim(), None).unwrap().evaluate(4).unwrap(),
        x
    );
    let doc = stdout(&run(&["nf", "--json", "--dim", "4", "--word", word]));
    assert_eq!(parse_element_document(doc.trim()).unwrap(), x);
    let again = stdout(&run(&["nf", "--json", "--element", doc.trim()]));
    assert_eq!(again, doc);
}

#[test]
fn element_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, r#"{"dim":3,"entries":[[1,3,9]]}"#).unwrap();
    let out = stdout(&run(&["metric", "--element-file", path.to_str().unwrap()]));
    assert!(out.starts_with("E = 3\n"), "{out}");
}

#[test]
fn metric_examples() {
    let out = stdout(&run(&[
        "metric",
        "--element",
        r#"{"dim":3,"entries":[[1,3,9]]}"#,
    ]));
    assert!(out.starts_with("E = 3\n"));
    assert!(out.lines().count() >= 2);
    let out = stdout(&run(&["metric", "--dim", "3", "--word", ""]));
    assert_eq!(out.trim(), "E = 0");
    let out = stdout(&run(&[
        "metric",
        "--dim",
        "3",
        "--word",
        "a[1,2]^2 a[2,3]^-1 a[1,3]^3",
        "--exact-radius",
        "6",
    ]));
    assert!(out.contains("exact = "), "{out}");
    assert!(out.contains("): holds"), "{out}");
    let out = stdout(&run(&[
        "metric",
        "--dim",
        "3",
        "--word",
        "a[1,2]^50",
        "--exact-radius",
        "3",
    ]));
    assert!(out.contains("exact > 3"));
}

#[test]
fn shortword_examples() {
    let out = stdout(&run(&["shortword", "--dim", "3", "--word", "a[1,3]^100"]));
    assert!(out.contains("length = 40\n"), "{out}");
    assert!(out.trim_end().ends_with("VERIFIED"));
    let out = stdout(&run(&["shortword", "--dim", "4", "--word", ""]));
    assert!(out.contains("length = 0\n") && out.contains("VERIFIED"));
    let out = stdout(&run(&["shortword", "--heisenberg", "1", "--word", "c^7"]));
    let len: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("length = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(len <= 16.0 * 7f64.sqrt());
    assert!(out.contains("VERIFIED"));
    let word = out.lines().find_map(|l| l.strip_prefix("word: ")).unwrap();
    assert!(!word.contains('c'));
}

#[test]
fn collect_reports_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let out = stdout(&run(&[
        "collect",
        "--dim",
        "4",
        "--word",
        "a[3,4] a[2,3] a[1,2] a[3,4]^-1",
        "--csv",
        path.to_str().unwrap(),
    ]));
    assert!(out.starts_with("normal form: "));
    assert!(out.contains("input length: 4"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("generator,i,j,span,max_count\n"));
}

#[test]
fn distort_examples() {
    let fitted = |args: &[&str]| -> f64 {
        let out = stdout(&run(args));
        let line = out
            .lines()
            .find(|l| l.starts_with("fitted exponent = "))
            .unwrap();
        line["fitted exponent = ".len()..]
            .split(' ')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    let f = fitted(&[
        "distort",
        "--embedding",
        "heis-in-T",
        "--k",
        "2",
        "--nmax",
        "4096",
    ]);
    assert!((f - 2.0).abs() <= 0.2, "{f}");
    let f = fitted(&["distort", "--embedding", "corner", "--k", "3", "--l", "5"]);
    assert!((f - 1.0).abs() <= 0.1, "{f}");
    let f = fitted(&[
        "distort",
        "--embedding",
        "block",
        "--k",
        "3",
        "--l",
        "5",
        "--a",
        "1",
    ]);
    assert!((f - 3.0).abs() <= 0.3, "{f}");
    let f = fitted(&[
        "distort",
        "--embedding",
        "composed",
        "--k",
        "3",
        "--l",
        "6",
        "--r",
        "2",
    ]);
    assert!((f - 2.0).abs() <= 0.2, "{f}");
    let f = fitted(&[
        "distort",
        "--embedding",
        "heis-subset",
        "--k",
        "1",
        "--l",
        "3",
        "--subset",
        "2",
    ]);
    assert!((f - 1.0).abs() <= 0.1, "{f}");
    let f = fitted(&[
        "distort",
        "--embedding",
        "cyclic",
        "--dim",
        "3",
        "--word",
        "a[1,3]",
    ]);
    assert!((f - 2.0).abs() <= 0.1, "{f}");
}

#[test]
fn distort_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = (0..2)
        .map(|i| dir.path().join(format!("p{i}.csv")))
        .collect();
    for f in &files {
        stdout(&run(&[
            "distort",
            "--embedding",
            "block",
            "--k",
            "3",
            "--l",
            "4",
            "--seed",
            "7",
            "--nmax",
            "2048",
            "--csv",
            f.to_str().unwrap(),
        ]));
    }
    let a = std::fs::read(&files[0]).unwrap();
    assert_eq!(a, std::fs::read(&files[1]).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# ") && text.contains("predicted exponent 2"));
    assert_eq!(
        text.lines().nth(1),
        Some("n,max_inner_estimate,log_n,log_max")
    );
}

#[test]
fn calibrate_examples() {
    let out = stdout(&run(&["calibrate", "--dim", "3", "--radius", "4"]));
    assert!(out.contains("best: C = "));
    assert!(out.contains("sandwich holds"));
    assert!(out.contains(" lower ") || out.contains(" upper "));
    let out = stdout(&run(&["calibrate", "--dim", "3", "--radius", "1"]));
    assert!(out.contains("best: C = 1 D = 0"), "{out}");
    let out = stdout(&run(&[
        "calibrate",
        "--heisenberg",
        "1",
        "--gens",
        "small",
        "--radius",
        "8",
    ]));
    assert!(out.contains("sandwich holds"));
}

#[test]
fn ball_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t3.ball");
    let out = stdout(&run(&[
        "ball",
        "--dim",
        "3",
        "--radius",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]));
    assert!(out.contains("sphere sizes: 1 6 22 54"), "{out}");
    let table = read_ball(std::io::BufReader::new(
        std::fs::File::open(Path::new(&path)).unwrap(),
    ))
    .unwrap();
    assert_eq!(table.len(), 83);
    let text = stdout(&run(&[
        "ball", "--dim", "3", "--gens", "1,2 2,3", "--radius", "2",
    ]));
    assert!(text.starts_with("NILBALL1\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["nf", "--dim", "3", "--word", "a[3,1]"])), 2);
    assert_eq!(code(&run(&["nf", "--dim", "3", "--word", "a[1,4]"])), 2);
    assert_eq!(code(&run(&["nf", "--element", "{"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(
        code(&run(&[
            "distort",
            "--embedding",
            "block",
            "--k",
            "3",
            "--l",
            "3"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["distort", "--embedding", "corner", "--k", "3"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "calibrate",
            "--dim",
            "3",
            "--gens",
            "1,3",
            "--radius",
            "1"
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "ball", "--dim", "4", "--radius", "6", "--budget", "1000"
        ])),
        3
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn budget_from_environment() {
    let o = run_env(
        &[
            "metric",
            "--dim",
            "4",
            "--word",
            "a[1,4]",
            "--exact-radius",
            "8",
        ],
        &[("NILMETRIC_BUDGET", "500")],
    );
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("radius"));
    let o = run_env(
        &[
            "metric",
            "--dim",
            "3",
            "--word",
            "a[1,3]",
            "--exact-radius",
            "2",
        ],
        &[("NILMETRIC_BUDGET", "500")],
    );
    assert_eq!(code(&o), 0);
}
