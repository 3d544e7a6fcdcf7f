use thiserror::Error;

/// Errors surfaced by the engine.
///
/// `Domain` covers ill-typed or out-of-range inputs, `Unsupported` marks an
/// operation the bound instance cannot perform (e.g. coequalizers in the rose
/// instance), and `Internal` flags a broken engine invariant and should never
/// fire.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported capability: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
