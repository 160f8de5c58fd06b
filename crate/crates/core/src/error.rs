use thiserror::Error;

use crate::poly::Var;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("cannot differentiate with respect to parameter `{0}` (parameters are constants)")]
    ParameterDerivative(Var),

    #[error("resultant requires positive degree in `{0}` for both operands")]
    ZeroDegree(Var),

    #[error("inexact division by a3 in the delta recursion at g = {genus}, s = {step}")]
    RecursionDivision { genus: u32, step: u32 },

    #[error("leading z-coefficient of Q is not a nonzero rational constant: {0}")]
    Normalization(String),

    #[error("spectral polynomial still depends on x: {0}")]
    XDependence(String),

    #[error("spectral polynomial has wrong shape: expected monic of degree {expected} in z, found {found}")]
    Degree { expected: u32, found: String },

    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("curve functions built over different (Q, F) contexts")]
    ContextMismatch,

    #[error("requested expansion order {requested} exceeds the series budget {budget}")]
    Truncation { requested: i64, budget: i64 },

    #[error("operator coefficient depends on z: {0}")]
    ZDependentCoefficient(String),

    #[error("root finder failed to converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("roots {0} and {1} coincide within the separation threshold")]
    MultipleRoot(usize, usize),

    #[error("x-derivative of Q vanishes at a root; choose another sample point")]
    DegenerateDerivative,

    #[error("ambiguous root pairing between neighbouring sample points")]
    BranchTracking,

    #[error("commutant degree bound too small even after {0} escalations")]
    DegreeBoundTooSmall(u32),

    #[error("term-count limit of {limit} exceeded while building {stage} ({found} terms)")]
    TermLimit {
        stage: &'static str,
        limit: usize,
        found: usize,
    },

    #[error("a numeric value is required for `{0}`")]
    SymbolicValue(Var),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by bad user input rather than an internal inconsistency.
    pub fn is_user_error(&self) -> bool {
        matches!(self, Error::Param(_) | Error::Parse(_))
    }
}
