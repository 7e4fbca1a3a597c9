//! `synthseg`: dataset generation, validation, evaluation and reporting.
//!
//! Exit status: 0 on success (including `--help`), 1 on usage errors, 2 on
//! data errors.

mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match commands::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("synthseg: {e}");
            ExitCode::from(if e.is_data_error() { 2 } else { 1 })
        }
    }
}
