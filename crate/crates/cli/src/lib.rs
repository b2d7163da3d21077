//! Command-line front end: state-file I/O, entanglement reports, seeded
//! random-state generation, and reproducible verification campaigns.

pub mod commands;
pub mod report;
pub mod statefile;
pub mod verify;

use std::fmt;

/// Exit-code-bearing error for every command. The code table:
/// 0 ok, 1 verification or numerical failure, 2 parse error, 3 norm error,
/// 4 undefined measure, 5 I/O error.
#[derive(Debug)]
pub enum CliError {
    Failure(String),
    Parse(String),
    Norm(String),
    Undefined(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Norm(_) => 3,
            CliError::Undefined(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Failure(msg)
            | CliError::Parse(msg)
            | CliError::Norm(msg)
            | CliError::Undefined(msg)
            | CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Maps core errors raised while processing an input file: validation
/// problems read as malformed input, an undefined measure keeps its own
/// exit code, and numerical breakdown is a generic failure.
pub fn map_core_error(err: entangle_core::Error) -> CliError {
    match err {
        entangle_core::Error::InvalidInput(msg) => CliError::Parse(msg),
        entangle_core::Error::InvalidPartition(msg) => CliError::Parse(msg),
        entangle_core::Error::UndefinedMeasure(msg) => {
            CliError::Undefined(format!("measure undefined: {msg}"))
        }
        entangle_core::Error::NumericalFailure(msg) => {
            CliError::Failure(format!("numerical failure: {msg}"))
        }
    }
}
