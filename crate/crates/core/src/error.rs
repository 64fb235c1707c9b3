//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires an inner-product (Euclidean or weighted-Euclidean) space")]
    NonEuclidean,

    #[error("empty point set")]
    EmptySet,

    #[error("degenerate point set: all points are zero")]
    DegenerateSet,

    #[error("vector is in the span of the basis (residual below rank tolerance)")]
    RankDeficient,

    #[error("no admissible atom extends the selected span")]
    RankExhausted,

    #[error("solver failed: {0}")]
    SolverFailure(String),

    #[error("iteration budget exceeded: {0}")]
    IterationBudgetExceeded(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
