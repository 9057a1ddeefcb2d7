//! Command failures and their exit codes.

use std::path::PathBuf;

use exactjoin::Error;

/// Exit code of an exact join.
pub const EXIT_EXACT: i32 = 0;
/// Exit code of an inexact join.
pub const EXIT_INEXACT: i32 = 1;
/// Any failure without a more specific code.
pub const EXIT_OTHER: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
/// The input is not in the form its domain requires.
pub const EXIT_DOMAIN_FORM: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    /// A certificate failed its checker; always a bug.
    #[error("witness failed verification: {0}")]
    Unverified(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { source, .. } | CliError::Core(source) => core_exit_code(source),
            CliError::Io { .. } | CliError::Usage(_) | CliError::Unverified(_) => EXIT_OTHER,
        }
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::DimensionMismatch { .. } => EXIT_DIMENSION,
        Error::NotBdForm(_) | Error::NotOctagonalForm(_) | Error::StrictInClosed(_) | Error::ClosurePointInClosed => {
            EXIT_DOMAIN_FORM
        }
        _ => EXIT_OTHER,
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
