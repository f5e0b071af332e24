//! Command-line front end for the `lss-sense` detectors.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod manifest;
pub mod settings;
pub mod verify;

use args::{Cli, Command};
use error::{CliError, CliResult};

pub const WORKERS_ENV: &str = "LSS_SENSE_WORKERS";

/// Worker count from `LSS_SENSE_WORKERS`, else the available parallelism.
pub fn workers_from_env() -> CliResult<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::NullDist(a) => commands::null_dist(&a, workers_from_env()?),
        Command::Roc(a) => commands::roc(&a, workers_from_env()?),
        Command::PdVsSnr(a) => commands::pd_vs_snr(&a, workers_from_env()?),
        Command::Threshold(a) => commands::threshold(&a, &mut stdout),
        Command::Verify(a) => verify::verify(&a, &mut stdout),
    }
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            let _ = io::stdout().flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
