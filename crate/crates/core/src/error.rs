use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An exponential-time oracle was asked to exceed its configured size cap.
    #[error("size cap exceeded: {what} has size {size}, cap is {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
