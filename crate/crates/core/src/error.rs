use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violates a documented precondition (bad norm, bad dimensions,
    /// non-finite entries, incomplete measurement sets, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An iterative kernel failed to converge within its sweep cap.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// A bipartition subset is empty, full, out of range, or repeated.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    /// The requested quantity is undefined for the given system (N < 2).
    #[error("undefined measure: {0}")]
    UndefinedMeasure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
