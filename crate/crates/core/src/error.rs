use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped by what the caller can do about them: malformed
/// input, a violated precondition of an operation, or an exhausted search
/// budget. [`Error::LemmaViolation`] should never occur; it signals that a
/// structural guarantee did not hold on some input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {offset} near {token:?}: {message}")]
    Parse {
        message: String,
        token: String,
        offset: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget exhausted after {explored} steps: {what}")]
    BudgetExhausted { what: String, explored: u64 },

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("structural guarantee violated: {0}")]
    LemmaViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, explored: u64) -> Self {
        Error::BudgetExhausted {
            what: what.into(),
            explored,
        }
    }

    /// True for the errors a caller may resolve by raising a budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. } | Error::CapExceeded(_))
    }
}
