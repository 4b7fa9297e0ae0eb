use thiserror::Error;

/// Errors raised by the library.
///
/// Precondition failures inside bound tables are not errors: they are
/// carried in [`crate::bounds::BoundReport`] so a table can contain
/// out-of-range cells. `Precondition` is reserved for operations that have
/// no meaningful partial result.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent: {0}")]
    Divergence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error (line {line}): {message}")]
    Parse { line: usize, message: String },

    #[error("size overflow: {0}")]
    Overflow(String),

    /// A check backed by a proven inequality failed. This always indicates
    /// an implementation bug and is surfaced separately from ordinary errors.
    #[error("theorem-backed invariant failed: {0}")]
    TheoremViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn divergence(msg: impl Into<String>) -> Self {
        Error::Divergence(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
