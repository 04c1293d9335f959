use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the solvers and their numerical building blocks.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("no convergence after {iterations} iterations (last iterate {last}, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("normalization failed: {0}")]
    Normalization(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
