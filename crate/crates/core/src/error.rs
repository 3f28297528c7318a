use thiserror::Error;

/// Errors raised by the library. The CLI maps the variants onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("inexact division, first remainder term {0}")]
    InexactDivision(String),
    #[error("invariant {id} failed: {msg}")]
    Invariant { id: &'static str, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

pub(crate) fn broken(id: &'static str, msg: impl Into<String>) -> Error {
    Error::Invariant { id, msg: msg.into() }
}
