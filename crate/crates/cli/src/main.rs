//! Command-line experiment harness: synthetic data generation, training,
//! evaluation, and parameter-grid benchmarking.

mod commands;
mod config;
mod hash;
mod runner;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::fmt;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lexiboost",
    version,
    about = "Boosted ensembles with LP-selected component weights for class-imbalanced data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a two-class synthetic Gaussian dataset (CSV + spec sidecar)
    Gen(GenArgs),
    /// Train a model and write the model file plus a training report
    Train(TrainArgs),
    /// Evaluate a model file against a labeled CSV
    Eval(EvalArgs),
    /// Run a benchmark grid from a JSON config
    Bench(BenchArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Total number of instances
    #[arg(long)]
    pub size: usize,
    /// Imbalance ratio (majority size over minority size, > 1)
    #[arg(long)]
    pub ir: f64,
    /// Majority center coordinate (the center is this value in every dimension)
    #[arg(long)]
    pub center: f64,
    /// Fraction of each class to replace with opposite-class draws
    #[arg(long, default_value_t = 0.0)]
    pub outlier_rate: f64,
    #[arg(long)]
    pub seed: u64,
    /// Output CSV path; the generator sidecar lands next to it as `<stem>.spec.json`
    #[arg(long)]
    pub out: std::path::PathBuf,
}

#[derive(Args)]
pub struct TrainArgs {
    /// Algorithm: adaboost | lpadaboost | dual-lpadaboost | lpboost |
    /// dual-lpboost | lpuboost | dual-lpuboost | lexiboost | dual-lexiboost
    #[arg(long)]
    pub algo: String,
    /// Training data CSV
    #[arg(long)]
    pub data: std::path::PathBuf,
    #[arg(long, default_value_t = false)]
    pub has_header: bool,
    /// Base learner: stump | tree | knn
    #[arg(long, default_value = "stump")]
    pub base: String,
    /// Neighbors for the knn base learner
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Depth cap for the tree base learner
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Boosting rounds
    #[arg(long, default_value_t = 10)]
    pub t: usize,
    /// Recorded for provenance; training itself is deterministic
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Regularization cost D for the soft-margin family (overrides --nu)
    #[arg(long)]
    pub d_cost: Option<f64>,
    /// Alternative to --d-cost: D = 1/nu
    #[arg(long)]
    pub nu: Option<f64>,
    /// Target-class cost multiplier for the uneven family
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Lower-cap divisor for the uneven dual loop
    #[arg(long)]
    pub d_lb: Option<f64>,
    /// Target class index for the uneven family (default: smallest class)
    #[arg(long)]
    pub target_class: Option<usize>,
    /// Dual-loop break threshold 1 - 1/|C| instead of the stricter 1/|C|
    #[arg(long, default_value_t = false)]
    pub relaxed_break: bool,
    /// Optional per-class costs for the cost-weighted final stage, e.g. 2,1
    #[arg(long, value_delimiter = ',')]
    pub costs: Option<Vec<f64>>,
    /// Output model path
    #[arg(long)]
    pub model: std::path::PathBuf,
    /// Output training-report path
    #[arg(long)]
    pub report: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: std::path::PathBuf,
    /// Labeled evaluation CSV
    #[arg(long)]
    pub data: std::path::PathBuf,
    #[arg(long, default_value_t = false)]
    pub has_header: bool,
    /// Output report path (stdout when omitted)
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Benchmark grid config (JSON)
    #[arg(long)]
    pub config: std::path::PathBuf,
    /// Output directory for results.json / results.csv
    #[arg(long)]
    pub out: std::path::PathBuf,
}

/// Errors carry the exit code contract: 1 usage, 2 data, 3 solver.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Solver(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Data(m) => write!(f, "data: {m}"),
            CliError::Solver(m) => write!(f, "solver: {m}"),
        }
    }
}

impl From<lexiboost_core::data::DataError> for CliError {
    fn from(e: lexiboost_core::data::DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => commands::gen::run(&args),
        Command::Train(args) => commands::train::run(&args),
        Command::Eval(args) => commands::eval::run(&args),
        Command::Bench(args) => commands::bench::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
