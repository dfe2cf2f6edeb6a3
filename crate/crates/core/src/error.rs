use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("index {index} out of range for dimension {dim}")]
    InvalidIndex { index: usize, dim: usize },

    #[error("size {size} exceeds the limit of {limit} for {what}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("matrix is not unitary (max deviation {deviation:.3e} exceeds {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("empty postselected state")]
    EmptyState,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
