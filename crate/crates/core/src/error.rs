use thiserror::Error;

/// Errors surfaced by every exact operation in this crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Mathematically invalid input: inverting zero, singular matrix,
    /// mismatched valuations, non-commuting generators, ...
    #[error("domain error: {0}")]
    Domain(String),

    /// Input is valid but outside the supported fragment (e.g. a
    /// characteristic-zero spectrum that does not split over Q).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A configured cap (element count, BFS radius, entry size) was hit.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// A search finished without producing a certificate; the caller may
    /// retry with a larger radius.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Malformed textual or structured input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
    pub fn cap(msg: impl Into<String>) -> Self {
        Error::CapExceeded(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
