//! The `heisenrig` command line: argument handling, per-command reports and
//! deterministic JSON or text rendering.

pub mod args;
pub mod commands;
pub mod input;
mod render;

use clap::Parser;
use serde_json::json;
use thiserror::Error;

pub use args::{Cli, Command, Format, RunArgs};
pub use commands::Status;

pub const SCHEMA: &str = "heisenrig-report/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Args(#[from] clap::Error),
}

/// What a run prints and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Builds the full report for a parsed command line.
pub fn report(cli: &Cli) -> Result<(Status, serde_json::Value), CliError> {
    let (status, result) = commands::run_command(&cli.config, &cli.command)?;
    let report = json!({
        "schema": SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "config": commands::config_json(&cli.config, &cli.command),
        "result": result,
        "status": status.as_str(),
    });
    Ok((status, report))
}

/// Exit code 0 on success, 2 when `svn` documents a failure, 1 on errors.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { exit_code: 0, stdout: text, stderr: String::new() }
            } else {
                Outcome { exit_code: 1, stdout: String::new(), stderr: text }
            };
        }
    };
    match report(&cli) {
        Ok((status, value)) => {
            let stdout = match cli.config.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&value).expect("json");
                    s.push('\n');
                    s
                }
                Format::Text => render::text(&value),
            };
            let exit_code = match (&cli.command, status) {
                (Command::Svn, Status::Fail) => 2,
                _ => 0,
            };
            Outcome { exit_code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { exit_code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
