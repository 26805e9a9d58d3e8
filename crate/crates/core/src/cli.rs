//! The `nilmetric` command line.
//!
//! Exit codes: 0 success, 2 input error, 3 resource limit, 4 internal
//! invariant breach.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::collection::collect;
use crate::distortion::{
    cyclic_profile, distortion_profile, embed_composed_split, embed_heis_in_t, embed_heis_subset,
    embed_t_block, embed_t_corner, DistortionProfile, SamplerSpec,
};
use crate::exact_metric::{bfs_ball, exact_length, write_ball, DEFAULT_BUDGET};
use crate::group::{
    matrix_to_heisenberg, GeneratorIndex, GroupElement, GroupSpec, NormalForm, Word,
};
use crate::quasimetric::{calibrate_on_table, estimate, MetricEstimate};
use crate::synthesis::{short_word, short_word_h};
use crate::text::{
    element_document, format_normal_form, format_word, parse_element_document, parse_word,
};
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "nilmetric",
    version,
    about = "Word metrics and distortion in Heisenberg and unitriangular groups"
)]
pub struct Cli {
    /// Seed for every randomized sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Cap on the number of elements a breadth-first search may store.
    #[arg(long, global = true, env = "NILMETRIC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an element.
    Nf {
        #[command(flatten)]
        input: Input,
        /// Print a JSON element document instead.
        #[arg(long)]
        json: bool,
    },
    /// Print the metric estimate, optionally with the exact word length.
    Metric {
        #[command(flatten)]
        input: Input,
        /// Also compute the exact length by searching the ball of this radius.
        #[arg(long)]
        exact_radius: Option<u32>,
        #[arg(long, default_value = "full")]
        gens: String,
    },
    /// Collect a word into normal form and report instance counts.
    Collect {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        word: String,
        /// Write per-generator peak counts as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build a short word for an element and verify it.
    Shortword {
        #[command(flatten)]
        input: Input,
    },
    /// Fit the constants C, D of the estimate on an exact ball.
    Calibrate {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: u32,
    },
    /// Measure the distortion profile of an embedding.
    Distort {
        #[arg(long, value_enum)]
        embedding: EmbeddingArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Block split.
        #[arg(long, default_value_t = 1)]
        a: usize,
        /// Composed exponent.
        #[arg(long)]
        r: Option<usize>,
        /// Comma-separated subset K for heis-subset.
        #[arg(long)]
        subset: Option<String>,
        /// Element generating the cyclic subgroup (cyclic only).
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1 << 14)]
        nmax: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Export the exact ball in NILBALL1 format.
    Ball {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: u32,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmbeddingArg {
    #[value(name = "heis-subset")]
    HeisSubset,
    #[value(name = "heis-in-T", alias = "heis-in-t")]
    HeisInT,
    Corner,
    Block,
    Composed,
    Cyclic,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Work in T_dim.
    #[arg(long, conflicts_with = "heisenberg")]
    pub dim: Option<usize>,
    /// Work in H_k, with the aliases a_i, b_i, c.
    #[arg(long)]
    pub heisenberg: Option<usize>,
    /// `full`, `small`, or a list like "1,2 2,3".
    #[arg(long, default_value = "full")]
    pub gens: String,
}

#[derive(Debug, Args)]
pub struct Input {
    #[arg(long, conflicts_with = "heisenberg")]
    pub dim: Option<usize>,
    #[arg(long)]
    pub heisenberg: Option<usize>,
    #[arg(long, conflicts_with_all = ["element", "element_file"])]
    pub word: Option<String>,
    /// JSON element document.
    #[arg(long, conflicts_with = "element_file")]
    pub element: Option<String>,
    #[arg(long)]
    pub element_file: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Resource(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn spec_of(
    dim: Option<usize>,
    heis: Option<usize>,
    fallback_dim: Option<usize>,
) -> CliResult<GroupSpec> {
    match (dim, heis) {
        (_, Some(k)) => Ok(GroupSpec::heisenberg(k)?),
        (Some(n), None) => Ok(GroupSpec::triangular(n)?),
        (None, None) => match fallback_dim {
            Some(n) => Ok(GroupSpec::triangular(n)?),
            None => Err(Failure::Input("give --dim or --heisenberg".into())),
        },
    }
}

fn heis_k(group: GroupSpec) -> Option<usize> {
    match group {
        GroupSpec::Heisenberg(k) => Some(k),
        GroupSpec::Triangular(_) => None,
    }
}

impl Input {
    fn resolve(&self) -> CliResult<(GroupSpec, GroupElement)> {
        let doc = match (&self.element, &self.element_file) {
            (Some(text), _) => Some(parse_element_document(text)?),
            (None, Some(path)) => Some(parse_element_document(&std::fs::read_to_string(path)?)?),
            (None, None) => None,
        };
        let (group, x) = match (doc, &self.word) {
            (Some(x), _) => (spec_of(self.dim, self.heisenberg, Some(x.dim()))?, x),
            (None, Some(text)) => {
                let w = parse_word(text, self.heisenberg)?;
                let group = spec_of(self.dim, self.heisenberg, None)?;
                (group, w.evaluate(group.dim())?)
            }
            (None, None) => {
                return Err(Failure::Input(
                    "give --word, --element or --element-file".into(),
                ))
            }
        };
        if x.dim() != group.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: group.dim(),
            }
            .into());
        }
        if !group.contains(&x) {
            return Err(Failure::Input(format!("{x} is not in {group}")));
        }
        Ok((group, x))
    }
}

fn parse_gens(spec: &str, group: GroupSpec) -> CliResult<Vec<GeneratorIndex>> {
    match spec {
        "full" => Ok(group.standard_generators()),
        "small" => Ok(group.small_generators()),
        list => {
            let mut gens = Vec::new();
            for tok in list.split_whitespace() {
                let (i, j) = tok.split_once(',').ok_or_else(|| {
                    Failure::Input(format!("bad generator `{tok}`, expected i,j"))
                })?;
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Failure::Input(format!("bad index in `{tok}`")))
                };
                let g = GeneratorIndex::new(parse(i)?, parse(j)?, group.dim())?;
                if !group.contains_generator(g) {
                    return Err(Failure::Input(format!("{g} is not a generator of {group}")));
                }
                gens.push(g);
            }
            Ok(gens)
        }
    }
}

fn format_estimate(e: &MetricEstimate) -> String {
    let mut s = format!("E = {}\n", e.value);
    for (term, v) in &e.terms {
        let _ = writeln!(s, "  {term}: {v}");
    }
    s
}

fn write_profile(
    p: &DistortionProfile,
    csv: Option<&PathBuf>,
    out: &mut impl Write,
) -> CliResult<()> {
    writeln!(out, "{}", p.description)?;
    writeln!(out, "{:>12} {:>24}", "n", "max_inner_estimate")?;
    for (n, v) in &p.samples {
        match v {
            Some(v) => writeln!(out, "{n:>12} {v:>24}")?,
            None => writeln!(out, "{n:>12} {:>24}", "-")?,
        }
    }
    match p.fitted_exponent {
        Some(f) => writeln!(
            out,
            "fitted exponent = {f:.4} (predicted {})",
            p.predicted_exponent
        )?,
        None => writeln!(
            out,
            "fitted exponent = n/a (predicted {})",
            p.predicted_exponent
        )?,
    }
    if let Some(path) = csv {
        p.write_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> CliResult<()> {
    match cli.command {
        Command::Nf { input, json } => {
            let (group, x) = input.resolve()?;
            if json {
                writeln!(out, "{}", element_document(&x))?;
            } else {
                writeln!(
                    out,
                    "{}",
                    format_normal_form(&NormalForm::of(&x), heis_k(group))?
                )?;
            }
        }
        Command::Metric {
            input,
            exact_radius,
            gens,
        } => {
            let (group, x) = input.resolve()?;
            let e = estimate(group, &x)?;
            write!(out, "{}", format_estimate(&e))?;
            if let Some(radius) = exact_radius {
                let gens = parse_gens(&gens, group)?;
                let table = bfs_ball(group.dim(), &gens, radius, cli.budget)?;
                match exact_length(&x, &table)? {
                    Some(len) => {
                        writeln!(out, "exact = {len}")?;
                        let cal = calibrate_on_table(group, &table)?;
                        let ok = cal.best.sandwich_holds(e.value, len as f64);
                        writeln!(
                            out,
                            "sandwich (C = {}, D = {}): {}",
                            cal.best.c,
                            cal.best.d,
                            if ok { "holds" } else { "fails" }
                        )?;
                    }
                    None => writeln!(out, "exact > {radius}")?,
                }
            }
        }
        Command::Collect { dim, word, csv } => {
            let w = parse_word(&word, None)?;
            let trace = collect(&w, dim)?;
            let direct = NormalForm::of(&w.evaluate(dim)?);
            if trace.result != direct {
                return Err(Failure::Internal(
                    "collection disagrees with matrix product".into(),
                ));
            }
            writeln!(
                out,
                "normal form: {}",
                format_normal_form(&trace.result, None)?
            )?;
            writeln!(out, "input length: {}", trace.input_length)?;
            writeln!(out, "swaps: {}", trace.swap_count)?;
            writeln!(out, "corrections: {}", trace.corrections)?;
            for (g, c) in &trace.max_counts {
                writeln!(out, "  peak {g}: {c}")?;
            }
            if let Some(path) = csv {
                let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
                w.write_record(["generator", "i", "j", "span", "max_count"])?;
                for (g, c) in trace.max_counts.iter().rev() {
                    w.write_record([
                        g.to_string(),
                        g.i().to_string(),
                        g.j().to_string(),
                        g.span().to_string(),
                        c.to_string(),
                    ])?;
                }
                w.flush()?;
            }
        }
        Command::Shortword { input } => {
            let (group, x) = input.resolve()?;
            let w: Word = match group {
                GroupSpec::Heisenberg(k) => short_word_h(&matrix_to_heisenberg(&x, k)?)?,
                GroupSpec::Triangular(_) => short_word(&x)?,
            };
            writeln!(out, "word: {}", format_word(&w, heis_k(group)))?;
            writeln!(out, "length = {}", w.length())?;
            writeln!(out, "E = {}", estimate(group, &x)?.value)?;
            if w.evaluate(group.dim())? != x {
                return Err(Failure::Internal(
                    "short word does not evaluate to the input".into(),
                ));
            }
            writeln!(out, "VERIFIED")?;
        }
        Command::Calibrate { group, radius } => {
            let spec = spec_of(group.dim, group.heisenberg, None)?;
            let gens = parse_gens(&group.gens, spec)?;
            let table = bfs_ball(spec.dim(), &gens, radius, cli.budget)?;
            let cal = calibrate_on_table(spec, &table)?;
            writeln!(
                out,
                "group {spec}, radius {radius}, ball size {}",
                cal.ball_size
            )?;
            for row in &cal.rows {
                write!(out, "D = {} C = {}", row.d, row.c)?;
                if let Some((x, e, l)) = &row.lower_witness {
                    write!(out, " lower {x} (E = {e}, len = {l})")?;
                }
                if let Some((x, e, l)) = &row.upper_witness {
                    write!(out, " upper {x} (E = {e}, len = {l})")?;
                }
                writeln!(out)?;
            }
            let mut all = true;
            for (x, len) in table.iter() {
                all &= cal
                    .best
                    .sandwich_holds(estimate(spec, x)?.value, len as f64);
            }
            if !all {
                return Err(Failure::Internal(
                    "calibrated constants fail on the ball".into(),
                ));
            }
            writeln!(out, "best: C = {} D = {}", cal.best.c, cal.best.d)?;
            writeln!(out, "sandwich holds on all {} elements", cal.ball_size)?;
        }
        Command::Distort {
            embedding,
            k,
            l,
            a,
            r,
            subset,
            word,
            dim,
            nmax,
            samples,
            csv,
        } => {
            let need = |v: Option<usize>, name: &str| {
                v.ok_or_else(|| Failure::Input(format!("--{name} is required for this embedding")))
            };
            let sampler = SamplerSpec {
                random_samples: samples,
                seed: cli.seed,
            };
            let profile = match embedding {
                EmbeddingArg::Cyclic => {
                    let dim = need(dim, "dim")?;
                    let text =
                        word.ok_or_else(|| Failure::Input("--word is required for cyclic".into()))?;
                    cyclic_profile(&parse_word(&text, None)?.evaluate(dim)?, nmax)?
                }
                kind => {
                    let e = match kind {
                        EmbeddingArg::HeisSubset => {
                            let text = subset
                                .ok_or_else(|| Failure::Input("--subset is required".into()))?;
                            let ks = text
                                .split(',')
                                .map(|s| s.trim().parse::<usize>())
                                .collect::<std::result::Result<Vec<_>, _>>()
                                .map_err(|_| Failure::Input(format!("bad subset `{text}`")))?;
                            embed_heis_subset(need(k, "k")?, need(l, "l")?, &ks)?
                        }
                        EmbeddingArg::HeisInT => embed_heis_in_t(need(k, "k")?)?,
                        EmbeddingArg::Corner => embed_t_corner(need(k, "k")?, need(l, "l")?)?,
                        EmbeddingArg::Block => embed_t_block(need(k, "k")?, need(l, "l")?, a)?,
                        EmbeddingArg::Composed => {
                            embed_composed_split(need(k, "k")?, need(l, "l")?, need(r, "r")?, a)?
                        }
                        EmbeddingArg::Cyclic => unreachable!(),
                    };
                    distortion_profile(&e, nmax, sampler)?
                }
            };
            write_profile(&profile, csv.as_ref(), out)?;
        }
        Command::Ball {
            group,
            radius,
            out: path,
        } => {
            let spec = spec_of(group.dim, group.heisenberg, None)?;
            let gens = parse_gens(&group.gens, spec)?;
            let table = bfs_ball(spec.dim(), &gens, radius, cli.budget)?;
            match path {
                Some(p) => {
                    write_ball(&table, BufWriter::new(File::create(&p)?))?;
                    let sizes: Vec<String> =
                        table.sphere_sizes().iter().map(u64::to_string).collect();
                    writeln!(out, "wrote {} elements to {}", table.len(), p.display())?;
                    writeln!(out, "sphere sizes: {}", sizes.join(" "))?;
                }
                None => write_ball(&table, &mut *out)?,
            }
        }
    }
    Ok(())
}

/// Parses `std::env::args` and runs the command, mapping failures to exit
/// codes.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        (Err(Failure::Input(m)), _) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        (Err(Failure::Resource(m)), _) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        (Err(Failure::Internal(m)), _) => {
            eprintln!("internal error: {m}");
            ExitCode::from(4)
        }
    }
}
