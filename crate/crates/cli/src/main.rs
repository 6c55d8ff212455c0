mod args;
mod commands;
mod error;
mod input;
mod table;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qcmm {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let outcome = commands::run(&cli.command)?;
    match &cli.command.args().out {
        Some(path) => fs::write(path, &outcome.text)?,
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes())?,
    }
    Ok(outcome.code)
}
