use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use iterasym_cli::commands::run;
use iterasym_cli::config::{Cli, RunConfig};
use iterasym_cli::error::CliError;

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cfg = RunConfig::from(Cli::parse());
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if let Err(e) = emit(&cfg, &report.output) {
        return fail(&e);
    }
    match &report.failure {
        Some(e) => fail(e),
        None => ExitCode::SUCCESS,
    }
}
