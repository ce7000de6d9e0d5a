use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix rows are ragged or empty")]
    InvalidShape,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("matrix is not symmetric (largest asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("gamma function has a pole at {0}")]
    PoleOfGamma(Complex64),

    #[error("incomplete gamma requires x > 0, got {0}")]
    NonPositiveX(f64),

    #[error("iteration did not converge")]
    NoConvergence,

    #[error("ellipsoid enumeration would exceed {cap} points")]
    TooManyPoints { cap: usize },

    #[error("Re(s) = {re} lies outside the region of absolute convergence (Re(s) >= {min} required)")]
    OutsideConvergence { re: f64, min: f64 },

    #[error("s = {s} is within {distance:e} of the pole at {pole}")]
    TooCloseToPole { s: Complex64, pole: f64, distance: f64 },

    #[error("grid has fewer than four usable points")]
    DegenerateGrid,

    #[error("evaluation failed at contour node {node}: {message}")]
    EvaluationFailure { node: usize, message: alloc::string::String },

    #[error("integrand is not finite at a quadrature node")]
    NonFiniteIntegrand,

    #[error("quadrature rule {0} is not available for this dimension")]
    UnsupportedQuadrature(&'static str),

    #[error("quadrature produced a non-positive denominator integral")]
    DegenerateQuadrature,

    #[error("direct solution and Cramer's rule disagree (relative difference {0:e})")]
    CrossCheckFailed(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
