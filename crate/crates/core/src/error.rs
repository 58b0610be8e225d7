//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by grid operations, operators, solvers and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Two grids (or a grid and an operator) disagree on shape.
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    /// An operation that divides by a norm received a zero-norm input.
    #[error("zero norm: {0}")]
    ZeroNorm(&'static str),

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Invalid construction parameters.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A linear system could not be factorized.
    #[error("singular system: {0}")]
    SingularSystem(&'static str),

    /// An iterative method produced NaN/Inf.
    #[error("divergence at iteration {iter}: {what}")]
    Divergence { iter: usize, what: &'static str },

    /// Training loss became non-finite.
    #[error("training diverged at epoch {epoch}")]
    TrainingDiverged { epoch: usize },

    /// Rejection sampling could not satisfy phantom constraints.
    #[error("phantom constraints unsatisfiable after {attempts} rejections")]
    RejectionLimit { attempts: usize },

    /// Malformed file contents.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            expected: expected.into(),
            got: got.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
