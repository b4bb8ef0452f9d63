use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The beta integral defining a collision rate does not converge.
    #[error("divergent rate integral: {0}")]
    Divergence(String),

    /// The request exceeds a configured resource cap; nothing was computed.
    #[error("resource budget exceeded: {what} = {requested} exceeds cap {cap}")]
    Resource {
        what: &'static str,
        requested: f64,
        cap: f64,
    },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn ensure_cap(what: &'static str, requested: f64, cap: f64) -> Result<()> {
    if requested > cap {
        Err(Error::Resource {
            what,
            requested,
            cap,
        })
    } else {
        Ok(())
    }
}
