use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::numerics::Complex;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A `0/0` form was hit while evaluating a rational map.
    DegenerateEvaluation,
    /// An iterative method did not converge; `best` carries the last iterates.
    NumericalFailure { what: &'static str, best: Vec<Complex> },
    /// An input violated an operation's precondition.
    Argument(String),
    /// The inputs are well formed but the problem has no solution.
    Domain(String),
    /// Exhaustive search refused because the instance is too large.
    Budget { limit: usize, requested: usize },
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateEvaluation => "degenerate-evaluation",
            Error::NumericalFailure { .. } => "numerical-failure",
            Error::Argument(_) => "argument",
            Error::Domain(_) => "domain",
            Error::Budget { .. } => "budget",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateEvaluation => f.write_str("indeterminate 0/0 evaluation"),
            Error::NumericalFailure { what, best } => {
                write!(f, "{what} did not converge ({} iterates kept)", best.len())
            }
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Domain(msg) => write!(f, "no solution: {msg}"),
            Error::Budget { limit, requested } => {
                write!(f, "search budget exceeded: requested {requested}, limit {limit}")
            }
        }
    }
}

impl core::error::Error for Error {}
