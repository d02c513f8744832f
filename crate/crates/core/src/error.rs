//! Error taxonomy shared by every module.

use thiserror::Error;

/// Errors produced by problem construction, simulation and estimation.
#[derive(Debug, Clone, Error)]
pub enum SgfError {
    /// A catalog problem was constructed with inconsistent data
    /// (nonpositive eigenvalue, box with `lo > hi`, ...).
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// An operation parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation needs metadata this instance does not carry
    /// (missing error-bound exponent, infinite subgradient bound, ...).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A non-finite value appeared during integration.
    #[error("numeric failure at step {step}: {detail}")]
    NumericFailure { step: usize, detail: String },

    /// The state norm crossed the divergence guard.
    #[error("trajectory diverged at step {step} (|x| = {norm:.3e})")]
    Divergence { step: usize, norm: f64 },

    /// A query point fell outside the valid range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// Rate fitting had too little usable data.
    #[error("fit error: {0}")]
    FitError(String),
}
