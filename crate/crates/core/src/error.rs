use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation exceeded its enumeration or precision budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The square-free part of an integer could not be certified by trial division.
    #[error("unfactored cofactor {cofactor} after trial division to {bound}")]
    Unfactored { cofactor: String, bound: u64 },

    /// A mathematical invariant failed; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
