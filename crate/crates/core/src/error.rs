use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input set")]
    EmptySet,
    #[error("variable {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("invalid bounds at variable {index}: lower {lower} is not below upper {upper}")]
    InvalidBounds { index: usize, lower: f64, upper: f64 },
    #[error("non-finite value in decision vector at index {0}")]
    NonFinite(usize),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("unknown seeding scheme `{0}`")]
    UnknownScheme(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;
