use thiserror::Error;

use crate::seed::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("seed index {index} out of range (have {count} seeds)")]
    SeedIndex { index: usize, count: usize },

    #[error("word for P_{level} is empty")]
    EmptyWord { level: usize },

    #[error("no seeds supplied")]
    NoSeeds,

    #[error("seed has epsilon {0}, expected -1 or +1")]
    BadEpsilon(i64),

    #[error("P_{level} fails the base-product constraints: {report}")]
    BaseProduct { level: usize, report: ValidationReport },

    #[error("quotient q_{index} is not available (source exhausted)")]
    QuotientExhausted { index: usize },

    #[error("quotient q_{index} must be positive")]
    NonPositiveQuotient { index: usize },

    #[error("level length k_{level} overflows 128 bits")]
    LengthOverflow { level: usize },

    #[error("exact digit budget of {cap} digits exceeded")]
    DigitBudget { cap: usize },

    #[error("tower horizon {have} too shallow, need {need}")]
    Horizon { have: usize, need: usize },

    #[error("seed is not A = [[0,1],[1,1]] or B = [[0,1],[1,-1]]")]
    NotFibonacciSeed,

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("operation requires the {expected} growth case")]
    WrongCase { expected: &'static str },

    #[error("{0}")]
    Undetermined(String),

    #[error("division by zero at checkpoint n = {index}")]
    ZeroDivisor { index: u64 },

    #[error("invalid argument: {0}")]
    Invalid(String),
}
