use thiserror::Error;

/// Errors produced by the ranking library.
///
/// Item indices carried by variants are 1-based, matching every external
/// representation (files, CLI, reports).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid score vector: {0}")]
    InvalidScores(String),

    #[error("scores of items {0} and {1} tie within tolerance")]
    TieDetected(usize, usize),

    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),

    #[error("input lies on or too close to a region boundary (slack {0:e})")]
    BoundaryCase(f64),

    #[error("no canonical region matched a generic input")]
    NotFound,

    #[error("max-plus reduction violated (residual {0:e})")]
    ReductionViolated(f64),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("construction failed at stage: {0}")]
    ConstructionFailed(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("exponent schedule exhausted at k = {0:e}")]
    KExhausted(f64),

    #[error("invalid perturbation spec: {0}")]
    InvalidSpec(String),

    #[error("cubic roots not separated (|r| = {0}, next modulus {1})")]
    RootNotSeparated(f64, f64),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
