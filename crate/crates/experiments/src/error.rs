use frog_core::FrogError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{what} = {value} exceeds the limit {max}")]
    Bound { what: &'static str, value: u64, max: u64 },

    #[error(transparent)]
    Engine(#[from] FrogError),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
