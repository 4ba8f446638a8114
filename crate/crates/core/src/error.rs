use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cap vector entries must be positive integers, got {0:?}")]
    InvalidCaps(Vec<u64>),

    #[error("cap vector must have at least one entry")]
    EmptyCaps,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("h* coefficient of degree {degree} is not a nonnegative integer: {value}")]
    InvalidHStar { degree: usize, value: String },

    /// An identity that must hold for every valid input did not.
    #[error("model violation: {0}")]
    ModelViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
