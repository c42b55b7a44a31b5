//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Dataset, grid or indicator dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A region restriction left no nodes to evaluate.
    #[error("empty region: {0}")]
    EmptyRegion(String),

    /// Relative error against a reference with zero norm.
    #[error("reference field has zero norm on the grid")]
    ZeroReferenceNorm,

    /// Malformed run-config or data file.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Process exit code for the CLI: config 2, io 3, dimension mismatch 4,
    /// everything else 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => 2,
            Error::Io(_) => 3,
            Error::DimensionMismatch(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
