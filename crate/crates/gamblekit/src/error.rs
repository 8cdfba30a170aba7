use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates the domain of the requested operation. The
    /// message names the violated assumption.
    #[error("domain error: {0}")]
    Domain(String),

    /// The exact oracle only accepts parameters that are small rationals.
    #[error("not representable as a small rational: {0}")]
    NonRational(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
