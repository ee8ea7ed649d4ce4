//! `degrowth`: degree-growth analyses of plane rational maps.
//!
//! Exit codes: 0 success, 1 internal failure, 2 invalid input, 3 capacity
//! exceeded (the partial report is still written, with `"partial": true`).

mod output;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use degrowth::ratmap::{MapSpec, DEFAULT_TERM_CAP};
use degrowth::spectral::DEFAULT_MAX_ORDER;
use degrowth::toric::MonomialMatrix;
use degrowth::Error;
use report::{Report, RunConfig, TopDegChoice};

#[derive(Parser)]
#[command(
    name = "degrowth",
    version,
    about = "Degree growth of rational self-maps of the plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (report.json, degrees.csv, residuals.csv); the JSON
    /// report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopDeg {
    Auto,
    Monomial,
    Fiber,
}

#[derive(Subcommand)]
enum Command {
    /// Degrees, spectral tower and fits for a monomial map.
    AnalyzeMonomial {
        /// Exponent matrix as a11,a12,a21,a22.
        #[arg(short = 'A', value_parser = parse_matrix, allow_hyphen_values = true)]
        matrix: MonomialMatrix,
        #[arg(short = 'n', default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Ray cap for resolving fans and tower levels.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Degrees, stability, topological degree and fits for a map file.
    AnalyzeRatmap {
        #[arg(long)]
        map: PathBuf,
        #[arg(short = 'n', default_value_t = 8)]
        n: usize,
        /// Term cap for composed maps.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: Option<u64>,
        #[arg(long, value_enum, default_value_t = TopDeg::Auto)]
        topdeg: TopDeg,
        /// Topological degree to use instead of computing it.
        #[arg(long)]
        lambda2: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Spectral radii, eigenclasses and identity checks along the model tower.
    Tower {
        #[arg(short = 'A', value_parser = parse_matrix, allow_hyphen_values = true)]
        matrix: MonomialMatrix,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fits deg_n ≈ b λ₁ⁿ to a given degree sequence.
    Fit {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u64>,
        /// Estimated from the degrees when omitted.
        #[arg(long)]
        lambda1: Option<f64>,
        #[arg(long)]
        lambda2: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Finds a linear recurrence satisfied by a degree sequence.
    Recurrence {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_matrix(s: &str) -> Result<MonomialMatrix, String> {
    let e: Vec<i64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad entry {t:?}: {e}"))
        })
        .collect::<Result<_, _>>()?;
    let e: [i64; 4] = e
        .try_into()
        .map_err(|v: Vec<i64>| format!("expected 4 entries, got {}", v.len()))?;
    MonomialMatrix::from_entries(e).map_err(|e| e.to_string())
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn config(command: &str, seed: u64) -> RunConfig {
    RunConfig {
        command: command.into(),
        matrix: None,
        map_file: None,
        n_max: None,
        depth: None,
        cap: None,
        seed,
    }
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), Failure> {
    let cap = |c: Option<u64>| c.map(|v| v as usize);
    Ok(match cli.command {
        Command::AnalyzeMonomial {
            matrix,
            n,
            depth,
            cap: c,
            common,
        } => {
            let mut cfg = config("analyze-monomial", common.seed);
            cfg.matrix = Some(matrix.entries());
            cfg.n_max = Some(n);
            cfg.depth = Some(depth);
            cfg.cap = cap(c);
            (
                report::analyze_monomial(cfg, &matrix, n, depth, cap(c))?,
                common.out,
            )
        }
        Command::AnalyzeRatmap {
            map,
            n,
            cap: c,
            topdeg,
            lambda2,
            common,
        } => {
            let text = std::fs::read_to_string(&map)
                .map_err(|e| Failure::Core(Error::Parse(format!("{}: {e}", map.display()))))?;
            let spec = MapSpec::from_json(&text)?;
            let mut cfg = config("analyze-ratmap", common.seed);
            cfg.map_file = Some(file_label(&map));
            cfg.n_max = Some(n);
            cfg.cap = cap(c);
            let choice = match (lambda2, topdeg) {
                (Some(v), _) => TopDegChoice::User(v),
                (None, TopDeg::Auto) => TopDegChoice::Auto,
                (None, TopDeg::Monomial) => TopDegChoice::Monomial,
                (None, TopDeg::Fiber) => TopDegChoice::Fiber,
            };
            let term_cap = cap(c).unwrap_or(DEFAULT_TERM_CAP);
            (
                report::analyze_ratmap(cfg, &spec, n, term_cap, choice)?,
                common.out,
            )
        }
        Command::Tower {
            matrix,
            depth,
            cap: c,
            common,
        } => {
            let mut cfg = config("tower", common.seed);
            cfg.matrix = Some(matrix.entries());
            cfg.depth = Some(depth);
            cfg.cap = cap(c);
            (report::tower(cfg, &matrix, depth, cap(c))?, common.out)
        }
        Command::Fit {
            degrees,
            lambda1,
            lambda2,
            common,
        } => {
            let cfg = config("fit", common.seed);
            (report::fit(cfg, degrees, lambda1, lambda2)?, common.out)
        }
        Command::Recurrence {
            degrees,
            max_order,
            common,
        } => {
            let cfg = config("recurrence", common.seed);
            (report::recurrence(cfg, degrees, max_order)?, common.out)
        }
    })
}

/// File name only, so reports do not depend on the working directory.
fn file_label(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| p.display().to_string())
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(dir) => output::write_report(dir, report)
            .map_err(|e| Failure::Io(format!("writing {}: {e}", dir.display()))),
        None => {
            print!("{}", output::report_json(report));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(report, out)| {
        emit(&report, out.as_deref())?;
        Ok(report)
    });
    match result {
        Ok(report) if report.partial => {
            for d in &report.diagnostics {
                eprintln!("note: {d}");
            }
            ExitCode::from(3)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Capacity { .. } => ExitCode::from(3),
                e if e.is_validation() => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
