use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A coefficient was requested beyond the end of a finite sequence.
    #[error("index {index} out of range for sequence of length {len}")]
    Index { index: usize, len: usize },

    /// A hypothesis of the operation failed; `indices` lists the offending
    /// coefficient positions when there are any.
    #[error("precondition violated: {reason} (indices {indices:?})")]
    Precondition { reason: String, indices: Vec<usize> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Simultaneous iteration did not reach tolerance. Carries the best
    /// iterate and its residuals.
    #[error("root finder did not converge after {iterations} sweeps (max residual {max_residual:e})")]
    NonConvergence { iterations: usize, max_residual: f64, roots: Vec<num_complex::Complex64>, residuals: Vec<f64> },

    #[error("pole: denominator vanishes at z = {0}")]
    Pole(num_complex::Complex64),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
