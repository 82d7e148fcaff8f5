use thiserror::Error;

/// Errors produced by the linear-algebra kernel, group machinery, and
/// certificate plumbing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u8, right: u8 },

    #[error("matrix is not invertible")]
    Singular,

    #[error("element order exceeds bound {bound}")]
    OrderBoundExceeded { bound: u64 },

    #[error("enumeration limit {limit} exceeded after {partial} elements")]
    EnumerationLimitExceeded { limit: usize, partial: usize },

    #[error("generator set is invalid: {0}")]
    InvalidGenerators(String),

    #[error("set is not divisor-closed: {value} present without divisor {divisor}")]
    NotDivisorClosed { value: u64, divisor: u64 },

    #[error("claimed center is not a central subgroup: {0}")]
    CenterNotCentral(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("matrix does not have the expected block-unitriangular shape: {0}")]
    Shape(String),

    #[error("structural verification failed: {0}")]
    Structural(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("certificate is malformed: {0}")]
    Certificate(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
