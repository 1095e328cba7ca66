//! `cavi`: batch front end for the `cavi-core` analyses.
//!
//! Every command writes a CSV or JSON artifact to standard output or to
//! `--out`. Exit status is 0 on success, 1 when the numerics reject the
//! input and 2 for malformed invocations.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::merge(argv) {
        Ok(argv) => argv,
        Err(e) => return report(e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        // help and version exit 0, everything else 2
        Err(e) => e.exit(),
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("cavi: {e}");
    ExitCode::from(e.exit_code())
}
