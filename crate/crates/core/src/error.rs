use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("structure construction failed: {0}")]
    Structure(String),
    #[error("rewriting failed: {0}")]
    Rewrite(String),
    #[error("sector conflict: {0}")]
    Sector(String),
    #[error("index {index} out of range for N = {n}")]
    IndexOutOfRange { index: i64, n: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("truncation exhausted: {0}")]
    Truncation(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
