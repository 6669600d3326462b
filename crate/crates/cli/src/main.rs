//! `movbeam <subcommand> --config <path> [--out <dir>] [--set key=value ...]`
//!
//! Exit codes: 0 success, 2 configuration, 3 hypothesis, 4 divergence, 5 numerical.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "movbeam",
    version,
    about = "Damped Kirchhoff beam on a domain with moving ends"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML file with flat keys; an empty file selects all defaults.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override a config key; repeatable and applied in order.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the boundary hypotheses on [0, T].
    Validate(Common),
    /// Integrate and write trace.csv and solution snapshots.
    Solve(Common),
    /// Integrate a manufactured case and report its errors.
    Mms(Common),
    /// Error table over refinement levels (convergence.csv).
    Convergence(Common),
    /// Error for every (h, theta) pair at fixed dt (theta_sweep.csv).
    ThetaSweep(Common),
    /// Energy series and exponential decay fit (energy.csv).
    Energy(Common),
}

type Handler = fn(&config::RunConfig, &std::path::Path) -> Result<Vec<PathBuf>, CliError>;

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let (common, f): (&Common, Handler) = match &cli.command {
        Command::Validate(c) => (c, |cfg, _| commands::validate(cfg)),
        Command::Solve(c) => (c, commands::solve),
        Command::Mms(c) => (c, commands::mms),
        Command::Convergence(c) => (c, commands::convergence),
        Command::ThetaSweep(c) => (c, commands::sweep),
        Command::Energy(c) => (c, commands::energy),
    };
    let cfg = config::load(&common.config, &common.set)?;
    f(&cfg, &common.out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
