//! Command-line front end for `hnkit`: bundle-spec parsing, subcommands,
//! JSON/DOT emission and the oracle-suite runner.

pub mod commands;
pub mod report;
pub mod spec;
pub mod suites;

use thiserror::Error;

/// Failure classes, each with its own exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<hnkit::Error> for CliError {
    fn from(e: hnkit::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<spec::SpecError> for CliError {
    fn from(e: spec::SpecError) -> Self {
        match e {
            spec::SpecError::Syntax { .. } => CliError::Usage(e.to_string()),
            spec::SpecError::Semantic { .. } => CliError::Validation(e.to_string()),
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub use commands::run;
