use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecurrenceError {
    #[error("argument outside the domain: {0}")]
    Domain(String),

    /// A function handed to the operator left `[0, 1]`.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("exact iteration depth {n} exceeds the limit {max}")]
    Bound { n: u32, max: u32 },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, RecurrenceError>;
