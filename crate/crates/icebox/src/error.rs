use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two polynomials built over different indeterminate registries were combined.
    #[error("registry mismatch: {0}")]
    RegistryMismatch(String),
    /// A mathematically invalid request (non-invertible substitution, bad boundary data, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-side precondition was violated.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// An invariant that should be unreachable was broken.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

#[allow(dead_code)]
pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
