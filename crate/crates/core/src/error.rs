use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid parameter (e.g. a nonpositive-integer lower parameter).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The requested series does not converge at this argument.
    #[error("divergence: {0}")]
    Divergence(String),
    /// A convergent computation exhausted its budget before reaching tolerance.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// The requested quantity is undefined (e.g. a ratio with zero denominator).
    #[error("undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
