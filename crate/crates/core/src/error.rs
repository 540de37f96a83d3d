use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("mode index must be >= 1")]
    InvalidModeIndex,

    #[error("grid point {value} lies outside the cavity [0, {length}]")]
    GridOutOfRange { value: f64, length: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tensor dimension {dim} exceeds the configured limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },

    #[error("need at least 3 uniformly spaced frames, got {0}")]
    TooFewFrames(usize),

    #[error("non-uniform sampling: {0}")]
    NonUniformSampling(String),

    #[error("field is not real-valued: {0}")]
    NotRealField(String),

    #[error("mismatched frames: {0}")]
    FrameMismatch(String),

    #[error("invalid quantization scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid state vector: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
