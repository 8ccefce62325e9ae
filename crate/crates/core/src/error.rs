use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("variable `{var}` is not in the alphabet for r={r}, n={n}")]
    Alphabet { var: String, r: usize, n: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
