use thiserror::Error;

use crate::freealg::Alphabet;

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: Alphabet, right: Alphabet },
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("letter {letter} is not in alphabet {alphabet}")]
    InvalidLetter { letter: String, alphabet: Alphabet },
    #[error("word of degree {degree} exceeds truncation order {truncation}")]
    DegreeExceedsTruncation { degree: usize, truncation: usize },
    #[error("series has a nonzero constant term")]
    NonzeroConstant,
    #[error("constant term is {0}, expected 1")]
    ConstantNotOne(String),
    #[error("series is not a Lie element: {0}")]
    NotLie(String),
    #[error("operation requires a {expected} alphabet, got {got}")]
    WrongAlphabetKind { expected: &'static str, got: Alphabet },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("factorization failed: {0}")]
    NotFactorizable(String),
    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
}

impl AlgebraError {
    pub fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        AlgebraError::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}
