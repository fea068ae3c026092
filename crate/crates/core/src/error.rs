use thiserror::Error;

/// Errors produced by the algebra and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("matrix logarithm undefined or ill-conditioned: {0}")]
    LogUndefined(String),
    #[error("not a unitary generator: {0}")]
    NotUnitaryGenerator(String),
    #[error("transfer function pole: {0}")]
    Pole(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
