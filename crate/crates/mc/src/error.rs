use thiserror::Error;

/// Errors raised by sampling and spectral analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid ensemble specification: {0}")]
    InvalidSpec(String),
    #[error("source matrix is not unitary: residual {0:e}")]
    NotUnitary(f64),
    #[error("eigen-solver failure: {0}")]
    Solver(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
