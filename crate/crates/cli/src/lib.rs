//! Command-line front end of `plasmode-core`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
pub use error::{CliError, CliResult};

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Dispersion(a) => commands::dispersion(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::BoundaryCurve(a) => commands::boundary_curve(a),
        Command::Field(a) => commands::field(a),
        Command::Distribution(a) => commands::distribution(a),
        Command::Absorb(a) => commands::absorb(a),
        Command::Verify(a) => commands::verify(a),
    }
}

/// Parses `args` and runs the subcommand. Exit status: 0 success, 1 bad
/// parameters or usage, 2 numerical failure, 3 failed verification.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("plasmode: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
