use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Words or tuples of incompatible shape.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operation needs at least {needed} words, got {got}")]
    Arity { needed: usize, got: usize },
    /// A parameter outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a configured computational limit.
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// The requested bound has no valid value for these parameters.
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
