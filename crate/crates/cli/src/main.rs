//! `ckls` — command-line driver for the mean-reverting diffusion toolkit.
//!
//! Three subcommands: `simulate` writes one sampled path as CSV, `estimate`
//! recovers the volatility elasticity from such a CSV, and `experiment` runs
//! one of the Monte Carlo studies. Every output directory receives a
//! `manifest.json` (written before any data file) whose configuration echo
//! suffices to reproduce the run bit-exactly.
//!
//! Exit status: 0 on success, 1 on runtime or estimation failure, 2 on usage
//! or configuration errors.

mod cmd_estimate;
mod cmd_experiment;
mod cmd_simulate;
mod csvio;
mod manifest;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable supplying the default output directory.
pub const OUT_DIR_ENV: &str = "CKLS_OUT_DIR";

/// Command failures, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or configuration: exit status 2.
    Usage(String),
    /// Failure while running: exit status 1.
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Maps a toolkit error on the run path: configuration complaints are usage
/// errors, everything else is a runtime failure.
pub fn map_core(e: ckls_core::Error) -> CliError {
    match e {
        ckls_core::Error::ConfigError { .. } => CliError::Usage(e.to_string()),
        _ => CliError::Runtime(e.to_string()),
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "ckls",
    version,
    about = "Simulate mean-reverting diffusions, estimate the volatility elasticity, and run the Monte Carlo study suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one path and write it as `t,value` CSV plus a run manifest
    Simulate(cmd_simulate::SimulateArgs),
    /// Estimate the volatility elasticity from a path CSV
    Estimate(cmd_estimate::EstimateArgs),
    /// Run a Monte Carlo study and write summary, plot data, and manifest
    Experiment(cmd_experiment::ExperimentArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => cmd_simulate::run(args),
        Command::Estimate(args) => cmd_estimate::run(args),
        Command::Experiment(args) => cmd_experiment::run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Output directory resolution: explicit flag, else `$CKLS_OUT_DIR`, else the
/// working directory; the directory is created if absent.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = flag
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| {
        CliError::Runtime(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })?;
    Ok(dir)
}
