//! Front end for the analogic workbench: argument parsing, command dispatch,
//! JSON reports, CSV sweeps and exit codes.

mod commands;
mod render;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use analogic_core::confirmation::ConfirmationError;
use analogic_core::exec::Execution;
use analogic_core::model::SearchError;
use analogic_core::scenario::ScenarioError;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{
    cmd_check, cmd_counterexample, cmd_find_model, cmd_fuzz_theorem, cmd_sweep,
    counterexample_scenario, write_sweep_csv, SWEEP_CSV_HEADER,
};
pub use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_NOT_FOUND: i32 = 5;
pub const EXIT_IO: i32 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::NotFound(_) => EXIT_NOT_FOUND,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Io { .. } => CliError::Io(e.to_string()),
            ScenarioError::Search(SearchError::Infeasible(_)) => CliError::Infeasible(format!(
                "{e}; the constraints may be unsatisfiable, or try another --seed or a larger --max-samples"
            )),
            ScenarioError::Search(SearchError::InvalidConfig(m)) => CliError::Usage(m),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ConfirmationError> for CliError {
    fn from(e: ConfirmationError) -> Self {
        match e {
            ConfirmationError::NotFound { .. } => CliError::NotFound(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "analogic",
    version,
    about = "Bayesian confirmation by analogy: check, solve, fuzz and sweep"
)]
pub struct Cli {
    /// Run every batch on one thread. Results are identical either way.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a scenario if needed and evaluate its schema conditions.
    Check(CheckArgs),
    /// Fuzz the transitivity theorem over random 3-atom distributions.
    FuzzTheorem(FuzzArgs),
    /// Re-solve or reweight a scenario over a grid of values and write CSV.
    Sweep(SweepArgs),
    /// Search for A, B, C with A confirming B, B confirming C, A disconfirming C.
    Counterexample(CounterexampleArgs),
    /// Solve a scenario's constraints and print the model.
    FindModel(FindModelArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Replaces every seed in the scenario file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample budget of the model finder.
    #[arg(long)]
    pub max_samples: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub json: bool,
    /// Strict conditions and the direct verdict must exceed this margin.
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub margin: f64,
    /// Draw X, Y, Z as random events instead of the three atoms.
    #[arg(long)]
    pub events: bool,
    /// Fuzz the entailment corollary (Y entails Z) instead.
    #[arg(long, conflicts_with = "events")]
    pub corollary: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub file: PathBuf,
    /// `bridge.prior` or `margins.<label>`.
    #[arg(long)]
    pub param: String,
    /// `lo:hi:step`.
    #[arg(long)]
    pub range: String,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub solve: SolveArgs,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    /// Write the counterexample as a scenario file.
    #[arg(long)]
    pub save: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FindModelArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub solve: SolveArgs,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return e.exit_code();
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let start = Instant::now();
    let result = commands::dispatch(&cli.command, exec, out);
    let _ = writeln!(err, "elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
