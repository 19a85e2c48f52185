use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("start symbol `{0}` has no productions")]
    UndeclaredStart(String),

    #[error("the grammar generates the empty language")]
    EmptyLanguage,

    #[error("letter `{0}` is not in the alphabet")]
    ForeignLetter(String),

    #[error("state budget of {limit} exceeded ({what})")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("time budget exceeded")]
    Timeout,

    #[error("invalid simple QNF grammar: {0}")]
    InvalidQnf(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("{0}")]
    Usage(String),
}
