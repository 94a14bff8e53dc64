//! Command-line front end: run the solvers on built-in or config-file
//! problems, batch benchmark suites, and turn stored fronts into metric
//! tables and performance profiles.

mod bench;
mod metrics_cmd;
mod problem_ref;
mod run_io;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit code for malformed configuration (bad problem refs, bad files).
pub const EXIT_CONFIG: u8 = 2;
/// Exit code for run-initialization failures (e.g. no feasible start).
pub const EXIT_INIT: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dmsfir",
    version,
    about = "Direct multisearch for constrained multiobjective problems, \
             with a violation filter, inexact restoration, and an \
             extreme-barrier baseline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one solver on one problem and write front.csv / log.csv / run.json
    Solve(SolveArgs),
    /// Run each solver on each suite row, one run per worker
    Benchmark(BenchmarkArgs),
    /// Compute metric tables over a benchmark output directory
    Metrics(MetricsArgs),
    /// Compute performance profiles from metric tables (or a benchmark dir)
    Profile(ProfileArgs),
    /// List the built-in problem catalog
    ListProblems,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolverChoice {
    /// Violation filter with inexact restoration
    FilterIr,
    /// Extreme-barrier baseline (needs a feasible start)
    Eb,
}

impl SolverChoice {
    pub fn name(&self) -> &'static str {
        match self {
            SolverChoice::FilterIr => "filter-ir",
            SolverChoice::Eb => "eb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DirectionsChoice {
    Coordinate,
    Halton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ForcingChoice {
    /// Plain dominance acceptance (integer-lattice globalization)
    Zero,
    /// Sufficient-decrease acceptance rho(t) = 1e-4 t^2
    Power,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Catalog name (optionally NAME@DIM) or path to a problem config file
    pub problem: String,
    /// Constraint family appended to the problem (0 = none)
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=6))]
    pub family: u8,
    /// Dimension override for catalog problems
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_enum, default_value = "filter-ir")]
    pub solver: SolverChoice,
    /// Maximum number of objective evaluations
    #[arg(long, default_value_t = 5000)]
    pub budget: u64,
    /// Stop when every listed step size falls below this
    #[arg(long, default_value_t = 1e-3)]
    pub min_step: f64,
    #[arg(long, value_enum, default_value = "coordinate")]
    pub directions: DirectionsChoice,
    /// Acceptance rule; defaults to zero for coordinate directions and
    /// power for halton
    #[arg(long, value_enum)]
    pub forcing: Option<ForcingChoice>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Feasibility tolerance on the aggregated violation
    #[arg(long, default_value_t = 1e-5)]
    pub feas_tol: f64,
    /// Violation threshold: 'auto' or a positive real
    #[arg(long, default_value = "auto")]
    pub h_max: String,
    /// Explicit start point 'v1,v2,...' (overrides the default initialization)
    #[arg(long)]
    pub start: Option<String>,
    /// Output directory (default <DMSFIR_OUT or out>/<problem>_<solver>)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Suite CSV with header 'problem,family'
    #[arg(long)]
    pub suite: PathBuf,
    /// Comma-separated list of solvers
    #[arg(long, default_value = "filter-ir,eb")]
    pub solvers: String,
    #[arg(long, default_value_t = 5000)]
    pub budget: u64,
    /// Parallel workers, one run each
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "coordinate")]
    pub directions: DirectionsChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-5)]
    pub feas_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Benchmark output directory (out/<solver>/<problem>/front.csv)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Comma-separated subset of purity,hv,gamma,delta
    #[arg(long, default_value = "purity,hv,gamma,delta")]
    pub metrics: String,
    #[arg(long, default_value_t = 1e-5)]
    pub feas_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Directory holding metrics.csv, or a benchmark directory
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "purity,hv,gamma,delta")]
    pub metrics: String,
    #[arg(long, default_value_t = 1e-5)]
    pub feas_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A command failure carrying its intended process exit code.
#[derive(Debug)]
pub struct CmdError {
    pub code: u8,
    pub message: String,
}

impl CmdError {
    pub fn config(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn init(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_INIT,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CmdError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::io(e.to_string())
    }
}

/// Output root: DMSFIR_OUT when set, else ./out.
pub fn output_root() -> PathBuf {
    std::env::var_os("DMSFIR_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve::cmd_solve(&args),
        Command::Benchmark(args) => bench::cmd_benchmark(&args),
        Command::Metrics(args) => metrics_cmd::cmd_metrics(&args),
        Command::Profile(args) => metrics_cmd::cmd_profile(&args),
        Command::ListProblems => {
            problem_ref::print_catalog();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
