//! Error type shared by all modules.

use thiserror::Error;

use crate::subset::Subset;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    EigFailed { sweeps: usize, off_norm: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at `{path}`: {message}")]
    ParseError { path: String, message: String },

    #[error("state vector has zero norm and cannot be normalized")]
    ZeroState,

    #[error(
        "functional is not monotone: F({smaller:#b}) = {smaller_value} > F({larger:#b}) = {larger_value}"
    )]
    MonotonicityViolation {
        smaller: Subset,
        larger: Subset,
        smaller_value: f64,
        larger_value: f64,
    },

    #[error("{what} too large: {actual} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("expected {expected} parties, got {actual}")]
    PartyCountMismatch { expected: usize, actual: usize },

    #[error("barcode contains an infinite bar; alternating sum requires all bars finite")]
    InfiniteBar,
}

pub type Result<T> = std::result::Result<T, Error>;
