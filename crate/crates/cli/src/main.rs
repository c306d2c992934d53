//! `tmotif`: count and analyse temporal network motifs from edge lists.
//!
//! Exit codes: 0 success, 1 domain violation (oracle or replay mismatch,
//! incompatible tables), 2 usage, parse or I/O error.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use manifest::Invocation;

/// Error carrying the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input.
    Usage(String),
    /// The inputs were fine but the result violates an expectation.
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

impl From<tmotif::GraphError> for CliError {
    fn from(e: tmotif::GraphError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<tmotif::ConstraintError> for CliError {
    fn from(e: tmotif::ConstraintError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<tmotif::EngineError> for CliError {
    fn from(e: tmotif::EngineError) -> Self {
        match e {
            tmotif::EngineError::BlowUp { .. } => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<tmotif::AnalysisError> for CliError {
    fn from(e: tmotif::AnalysisError) -> Self {
        match e {
            tmotif::AnalysisError::Argument(_) => CliError::Usage(e.to_string()),
            tmotif::AnalysisError::Engine(inner) => inner.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = Invocation {
        argv: std::env::args().skip(1).collect(),
        cwd: std::env::current_dir()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|_| ".".into()),
    };
    match commands::run(cli, &invocation) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tmotif: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
