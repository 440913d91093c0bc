mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::Parser;
use serde_json::Value;

use args::Cli;
use output::{render, write_output, CliError};

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GADGETLAB_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("GADGETLAB_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot configure {threads} threads: {e}")))
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.kind.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::usage(e.to_string().trim_end())),
    };
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    let outcome = match commands::run(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => return fail(&e),
    };
    if outcome.report != Value::Null {
        if let Err(e) = write_output("-", &render(&outcome.report, cli.tsv)) {
            return fail(&e);
        }
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
