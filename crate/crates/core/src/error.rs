use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain ({reason})")]
    Domain {
        function: &'static str,
        value: Complex64,
        reason: &'static str,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("invalid flattening: {0}")]
    InvalidFlattening(String),

    #[error("symbolic consistency check failed: {0}")]
    Consistency(String),

    #[error("triangulation: {0}")]
    Triangulation(String),

    #[error("malformed document: {0}")]
    Parse(String),

    #[error("Newton solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("shapes do not satisfy the gluing equations: {0}")]
    NotSolved(String),

    #[error("integer system has no solution: {0}")]
    Inconsistent(String),

    #[error("integer overflow in exact linear algebra")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(function: &'static str, value: Complex64, reason: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            reason,
        }
    }
}
