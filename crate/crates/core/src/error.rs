use thiserror::Error;

/// Errors raised by the model, exact engine and asymptotic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix that must be invertible is singular or indefinite.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// The operation is only defined in the high temperature regime.
    #[error("operation requires the high temperature regime (margin {margin:.3e})")]
    Regime { margin: f64 },

    /// A table or enumeration would exceed the supported size.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// The pair-partition enumeration is too large.
    #[error("K + L = {0} exceeds the pair-partition limit of 16")]
    Complexity(usize),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failed: estimated error {estimate:.3e} above tolerance {tolerance:.3e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    /// Newton iteration failed to converge.
    #[error("no convergence from start ({y1}, {y2}) after {iterations} iterations")]
    NonConvergence { y1: f64, y2: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
