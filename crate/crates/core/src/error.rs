use thiserror::Error;

/// Errors surfaced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("polytope is not full-dimensional (dimension {dim} in ambient dimension {ambient})")]
    NotFullDimensional { dim: usize, ambient: usize },

    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("arithmetic overflow in machine-integer kernel: {0}")]
    Overflow(&'static str),

    #[error("point configuration too large: {points} points, at most {limit} supported")]
    ConfigTooLarge { points: usize, limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
