use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid radius {0}: must satisfy 0 < r <= sqrt(2)")]
    InvalidRadius(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("degenerate policy: {0}")]
    DegeneratePolicy(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// Normalized error is undefined when the initial vector is zero.
    #[error("normalized error undefined for a zero initial vector")]
    UndefinedError,

    #[error("not converged within the tick budget (last fraction above epsilon: {last_fraction})")]
    NotConverged { last_fraction: f64 },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("no spectral gap: lambda2 = {0}")]
    NoGap(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
