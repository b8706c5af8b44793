use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("entry size {bits} bits exceeds the limit of {limit} bits after {steps} products")]
    Resource { bits: u64, limit: u64, steps: u32 },
    #[error("power iteration did not converge in {0} iterations")]
    Numeric(usize),
}

pub type Result<T> = std::result::Result<T, CertifyError>;
