use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, ExpRkError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpRkError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("phi cache was built for a different operator or step size")]
    CacheMismatch,

    #[error("phi cache has no entry for phi_{j} at scale {scale}")]
    MissingCacheEntry { j: u32, scale: Rational },

    #[error("solution blew up at step {step}")]
    BlowUp { step: usize },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown order condition {0} (expected 1..=16)")]
    UnknownCondition(u32),

    #[error("index {index} out of range 2..={max}")]
    IndexOutOfRange { index: usize, max: usize },
}
