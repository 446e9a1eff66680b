//! Growth exponents, ratio limits and exact term sequences for random
//! Fibonacci recurrences whose step pattern follows a balanced word built
//! from a continued-fraction schedule.

pub mod error;
pub mod growth;
pub mod logmat;
pub mod matrix;
pub mod oracle;
pub mod periodic;
pub mod seed;
pub mod sequence;
pub mod word;

pub use error::{Error, Result};
pub use matrix::IMatrix2;
pub use seed::SeedMatrix;
