use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exactjoin::Rational;
use exactjoin_cli::bench::{self, BenchConfig};
use exactjoin_cli::commands::{self, MergeMode, OracleOptions, Outcome};
use exactjoin_cli::domain::{DomainKind, OracleMode};
use exactjoin_cli::error::{CliError, CliResult, EXIT_EXACT};
use exactjoin_cli::fuzz::{self, FuzzConfig};
use exactjoin_cli::with_domain;

/// Exact join detection for numerical abstract domains.
#[derive(Parser, Debug)]
#[command(name = "exactjoin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the join of two shapes is their union. Exit 0 when
    /// exact, 1 when inexact.
    ExactJoin {
        /// Domain of both files; inferred from the first keyword if omitted.
        #[arg(long)]
        domain: Option<DomainKind>,
        a: PathBuf,
        b: PathBuf,
    },
    /// Compare detection with a brute-force oracle. Exit 1 on disagreement.
    Oracle {
        #[arg(long)]
        domain: Option<DomainKind>,
        /// `grid` or `complement`; the default depends on the domain.
        #[arg(long)]
        mode: Option<OracleMode>,
        /// Grid step, a positive rational such as `1/2`.
        #[arg(long)]
        step: Option<Rational>,
        /// Grid box: `lo:hi` for every axis, or one range per axis
        /// separated by commas.
        #[arg(long, allow_hyphen_values = true)]
        bbox: Option<String>,
        a: PathBuf,
        b: PathBuf,
    },
    /// Merge the disjuncts of a powerset whose join is exact.
    Merge {
        #[arg(long)]
        domain: Option<DomainKind>,
        /// `pairwise` or `full`.
        #[arg(long, default_value = "pairwise")]
        mode: MergeMode,
        /// Largest subset tried by a full merge.
        #[arg(long, default_value_t = exactjoin::powerset::DEFAULT_SIZE_CAP)]
        size_cap: usize,
        file: PathBuf,
    },
    /// Print a shape in canonical form; for polyhedra print both
    /// descriptions and check the round trip.
    Convert {
        #[arg(long)]
        domain: Option<DomainKind>,
        file: PathBuf,
    },
    /// Compare the three-shape BD conjecture with the coverage oracle on
    /// random triples.
    FuzzConjecture {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Largest dimension drawn.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Integer bounds are drawn from `[-bound, bound]`.
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory for counterexample files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a CSV of median detection time against dimension.
    Bench {
        #[arg(long, default_value = "box")]
        domain: DomainKind,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        sizes: Vec<usize>,
        /// Instances per size.
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn domain_or_infer(domain: Option<DomainKind>, file: &std::path::Path) -> CliResult<DomainKind> {
    domain.map_or_else(|| commands::infer_domain(file), Ok)
}

fn run(cli: Cli) -> CliResult<Outcome> {
    commands::check_format_version(std::env::var("EXACTJOIN_FORMAT_VERSION").ok().as_deref())?;
    match cli.command {
        Command::ExactJoin { domain, a, b } => {
            let kind = domain_or_infer(domain, &a)?;
            with_domain!(kind, T => commands::exact_join::<T>(&a, &b))
        }
        Command::Oracle { domain, mode, step, bbox, a, b } => {
            let kind = domain_or_infer(domain, &a)?;
            let opts = OracleOptions { mode, step, bbox };
            with_domain!(kind, T => commands::oracle::<T>(&a, &b, &opts))
        }
        Command::Merge { domain, mode, size_cap, file } => {
            let kind = domain_or_infer(domain, &file)?;
            with_domain!(kind, T => commands::merge::<T>(&file, mode, size_cap))
        }
        Command::Convert { domain, file } => {
            let kind = domain_or_infer(domain, &file)?;
            commands::convert(kind, &file)
        }
        Command::FuzzConjecture { trials, seed, dim, bound, jobs, out } => {
            if dim == 0 || bound < 0 {
                return Err(CliError::Usage("dim must be positive and bound non-negative".into()));
            }
            let cfg = FuzzConfig { trials, seed, max_dim: dim, bound, jobs, out };
            let report = fuzz::run(&cfg)?;
            Ok(Outcome { stdout: fuzz::format_report(&cfg, &report), code: EXIT_EXACT })
        }
        Command::Bench { domain, sizes, trials, seed, jobs } => {
            let cfg = BenchConfig { kind: domain, sizes, reps: trials, seed, jobs, ..BenchConfig::default() };
            let rows = bench::run(&cfg)?;
            let mut out = commands::header();
            out.push_str(&bench::to_csv(domain, &rows));
            Ok(Outcome { stdout: out, code: EXIT_EXACT })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
