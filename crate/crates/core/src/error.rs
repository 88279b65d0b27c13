use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A formula was evaluated too close to its singular set, or an input
    /// carried a non-finite component. The message names the offending point.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructor received parameters outside its contract.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Configuration parsing or validation failed.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
