use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cuntz_cli::commands::{cmd_osc, cmd_rc, cmd_rho, Overrides};
use cuntz_cli::golden::{diff, parse_expected, Status, EXPECTED};
use cuntz_cli::{CliError, QueryDocument, Report};
use cuntz_core::harness::{run_suite_with, SuiteConfig};

/// Exact rank ratios, radii of comparison and oscillation on small
/// Cu-semigroup models.
#[derive(Parser)]
#[command(name = "cuntz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank ratio ρ(x, y) or ρ_z(x, y) from a query document.
    Rho {
        doc: PathBuf,
        #[command(flatten)]
        flags: QueryFlags,
    },
    /// Radius of comparison (rc, rc_strict, rc_search, irc, rc_range).
    Rc {
        doc: PathBuf,
        #[command(flatten)]
        flags: QueryFlags,
    },
    /// Oscillation and the four-way rank-continuity check of a profile.
    Osc { doc: PathBuf },
    /// Recompute the worked examples and diff against expected values.
    Examples {
        /// Keep only entries whose name contains this text.
        #[arg(long, alias = "only")]
        filter: Option<String>,
        /// Expectation file to compare against instead of the built-in one.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Run the property suite.
    Verify {
        /// Property to run; repeat or separate with commas. Default: all.
        #[arg(long, alias = "filter", value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value_t = 256)]
        cases: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum number of cases satisfying the hypotheses.
        #[arg(long, default_value_t = 50)]
        floor: u32,
    },
}

#[derive(Args)]
struct QueryFlags {
    /// Element complexity bound for searches and range samples.
    #[arg(long)]
    bound: Option<u64>,
    /// Search grid `STEP` or `STEP:MAX` (exact rationals).
    #[arg(long)]
    grid: Option<String>,
    /// Also report a sampled lower bound from this many functionals.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl From<QueryFlags> for Overrides {
    fn from(f: QueryFlags) -> Self {
        Overrides {
            bound: f.bound,
            grid: f.grid,
            samples: f.samples,
            seed: f.seed,
        }
    }
}

fn load(path: &PathBuf) -> Result<QueryDocument, CliError> {
    QueryDocument::parse(&std::fs::read_to_string(path)?)
}

fn query(path: &PathBuf, run: impl FnOnce(&QueryDocument) -> Result<Report, CliError>) -> ExitCode {
    match load(path).and_then(|doc| run(&doc)) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}

fn examples(filter: Option<String>, expected: Option<PathBuf>) -> ExitCode {
    let text = match expected {
        Some(p) => match std::fs::read_to_string(&p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => EXPECTED.to_string(),
    };
    let expected = match parse_expected(&text) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: expectation file: {e}");
            return ExitCode::from(2);
        }
    };
    let rows = diff(&expected, filter.as_deref());
    let mut report = Report::default();
    for row in &rows {
        let value = row.value.as_deref().unwrap_or("-");
        let line = match &row.status {
            Status::Match => format!("match     {} = {value}", row.name),
            Status::Mismatch { expected } => {
                format!("MISMATCH  {} = {value} (expected {expected})", row.name)
            }
            Status::Unexpected => format!("MISMATCH  {} = {value} (not in the expectation file)", row.name),
            Status::Missing { expected } => format!("MISMATCH  {} not computed (expected {expected})", row.name),
        };
        report.line(line);
        report.quiet(&row.name, value);
    }
    let bad = rows.iter().filter(|r| !r.ok()).count();
    report.line(format!("{} entries, {bad} mismatched", rows.len()));
    report.quiet("mismatches", bad);
    print!("{report}");
    if bad == 0 && !rows.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn verify(only: Vec<String>, cases: u32, seed: u64, floor: u32) -> ExitCode {
    let names: Vec<&str> = only.iter().map(String::as_str).collect();
    let cfg = SuiteConfig {
        cases,
        seed,
        min_non_vacuous: floor,
    };
    let suite = match run_suite_with(&names, &cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut report = Report::default();
    report.line(suite.to_string().trim_end());
    report.quiet("seed", seed);
    report.quiet("cases", cases);
    for p in &suite.properties {
        report.quiet(
            format!("property.{}", p.name),
            format!("{} passed={} vacuous={}", p.status(), p.passed, p.vacuous),
        );
    }
    report.quiet("failed", suite.failures().count());
    print!("{report}");
    if suite.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Rho { doc, flags } => {
            let ov = flags.into();
            query(&doc, |d| cmd_rho(d, &ov))
        }
        Command::Rc { doc, flags } => {
            let ov = flags.into();
            query(&doc, |d| cmd_rc(d, &ov))
        }
        Command::Osc { doc } => query(&doc, cmd_osc),
        Command::Examples { filter, expected } => examples(filter, expected),
        Command::Verify {
            only,
            cases,
            seed,
            floor,
        } => verify(only, cases, seed, floor),
    }
}
