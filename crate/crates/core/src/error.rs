use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by operators, solvers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("Walsh-Hadamard operator requires a power-of-two length, got {0}")]
    NotPowerOfTwo(usize),

    #[error("operator does not have orthonormal rows; use the steepest-descent dual step")]
    NotOrthonormal,

    #[error("step-size condition violated: tau * lambda_max + gamma = {value:.6} >= 2")]
    StepSizeCondition { value: f64 },

    #[error("unsupported model for this solver: {0}")]
    UnsupportedModel(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
