//! `pindist`: reproducible runs of the pinned-distance verifiers.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::CommonArgs;

#[derive(Parser, Debug)]
#[command(name = "pindist", version, about = "Pinned distance sets over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the field parameters and modulus.
    FieldInfo(CommonArgs),
    /// Run every applicable check and write one JSON report per check.
    Verify(CommonArgs),
    /// Write per-pin second moments as CSV plus a summary JSON.
    Sweep(CommonArgs),
    /// Empirical pin-success rates for random sets of several sizes.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Trials per size.
    #[arg(long, default_value_t = 10)]
    trials: u64,
    /// Comma-separated set sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<u64>,
}

/// Exit status when a check ran and failed.
const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for invalid configuration or runtime errors.
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::FieldInfo(args) => commands::field_info(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Experiment(ex) => commands::experiment(&ex.common, ex.trials, &ex.sizes),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
