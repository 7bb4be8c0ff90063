use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system type {0:?} (expected F4 or G2)")]
    UnsupportedType(String),
    #[error("not a ρ-image: {0} is not in the Weyl orbit of ρ")]
    NotRhoImage(String),
    #[error("unknown parabolic label {0:?}")]
    UnknownLabel(String),
    #[error("gamma violates sign contract at root {root}: level {level}")]
    GammaViolation { root: String, level: String },
    #[error("no grading element found in the search box")]
    NoGamma,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid reduced word: {0}")]
    InvalidWord(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
