use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("invalid timing configuration: {0}")]
    InvalidTiming(String),

    #[error("parameter `{name}` = {value} is outside [0, 1]")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("matrix is not a valid state: {0}")]
    InvalidState(String),

    #[error("matrix has no positive part (trace {0:e} after clipping)")]
    DegenerateMatrix(f64),

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialization(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the caller's configuration or inputs, as
    /// opposed to numerical or I/O failures.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidProbabilities(_)
                | Error::InvalidTiming(_)
                | Error::ParameterOutOfRange { .. }
                | Error::InvalidConfig(_)
                | Error::InsufficientSamples { .. }
        )
    }
}
