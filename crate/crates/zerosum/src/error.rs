use thiserror::Error;

/// Errors produced by group construction, sequence queries, and searches.
#[derive(Debug, Error)]
pub enum Error {
    /// The input data does not describe a valid object (bad Cayley table,
    /// malformed sequence text, inconsistent JSON, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// The inputs are well-formed but outside an operation's domain
    /// (wrong group kind, index out of range, parameter bounds violated).
    #[error("domain error: {0}")]
    Domain(String),

    /// The computation would exceed a configured capacity limit.  Callers
    /// may retry with a larger budget where that makes sense.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
