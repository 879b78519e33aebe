//! Error type shared by the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested parameters cannot be handled (bad input, unsupported
    /// sizes, no suitable curve).
    #[error("invalid parameters: {0}")]
    Params(String),

    /// A randomized search ran out of its trial budget.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// Input lies in a degenerate configuration the operation cannot handle.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A replayed certificate or relation failed a check.
    #[error("verification failed: {0}")]
    Verify(String),

    /// A document could not be parsed.
    #[error("malformed document: {0}")]
    Format(String),

    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
