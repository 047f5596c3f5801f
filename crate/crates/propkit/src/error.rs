use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("argument error: {0}")]
    Argument(String),

    /// A request lies outside what the engine computes.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// A table was queried outside its window and no bound settles the value.
    #[error("window overflow: ({m},{n},{rho}) is outside the table window and not forced to zero")]
    WindowOverflow { m: usize, n: usize, rho: usize },

    /// An internal algebraic invariant failed, such as d^2 != 0.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unknown name: {0}")]
    Unknown(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn cap(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
}
