use thiserror::Error;

use crate::qqm::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bit index {index} outside 0..={n}")]
    BitIndex { index: usize, n: usize },

    #[error("{what} too large: {value} exceeds limit {limit}")]
    SizeGuard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("validation failed: {}", .0.failure_summary())]
    Validation(Box<ValidationReport>),

    #[error("unknown output label {0}")]
    UnknownLabel(u32),

    #[error("degree {degree} exceeds query budget 2t = {budget}")]
    DegreeExceedsBudget { degree: usize, budget: usize },

    #[error("epsilon {0} outside the allowed range {1}")]
    EpsilonDomain(f64, &'static str),

    #[error("empty decomposition")]
    EmptyDecomposition,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
