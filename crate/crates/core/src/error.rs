use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid dimension: {0}")]
    InvalidDim(String),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("witness is not unit trace (trace = {0})")]
    Unnormalized(f64),

    #[error("witness trace {0} is too close to zero to normalize")]
    DegenerateWitness(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("no strictly feasible starting point: {0}")]
    NoInteriorPoint(String),

    #[error("iteration limit reached: {0}")]
    MaxIterations(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
