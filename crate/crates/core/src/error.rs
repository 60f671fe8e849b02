use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("unresolved structure constant: {0}")]
    Unresolved(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("problem too large: {0}")]
    TooLarge(String),
}

impl Error {
    /// Whether the error stems from bad user input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Invalid(_) | Error::TooLarge(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
