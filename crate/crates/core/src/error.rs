use thiserror::Error;

/// A syntax error at a character offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
    #[error("type error at {path}: {msg}")]
    Type { path: String, msg: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
