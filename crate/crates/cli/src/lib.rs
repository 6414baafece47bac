//! Command-line pipeline: angle generation, circuit synthesis, purity
//! sweeps, Simpson mode extraction, prime/composite classification and gate
//! audits, with reproducible seeding and machine-readable output.

pub mod commands;
pub mod config;
pub mod formats;
pub mod manifest;

use std::fmt;

/// Process exit codes: 0 success, 1 classification disagreement, 2 config
/// error, 3 resource error.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Disagreement(String),
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Disagreement(_) => 1,
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Disagreement(msg) => write!(f, "classification disagreement: {msg}"),
            CliError::Resource(msg) => write!(f, "resource limit: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qprimes_core::Error> for CliError {
    fn from(err: qprimes_core::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {err}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Config(format!("json: {err}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Config(format!("csv: {err}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
