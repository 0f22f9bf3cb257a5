use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root solver did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    SolverFailure {
        iterations: usize,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
        worst_residual: f64,
    },

    #[error("pole at z = {at}")]
    Pole { at: Complex64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contour |z| = {radius} passes within {distance:e} of the target")]
    ContourProximity { radius: f64, distance: f64 },

    #[error("adaptive contour refinement at |z| = {radius} exceeded {limit} nodes")]
    RefinementOverflow { radius: f64, limit: usize },

    #[error("winding count at |z| = {radius} is not integral (residual {residual:e})")]
    NonIntegralWinding { radius: f64, residual: f64 },

    #[error("winding counts decreased from {previous} to {current} at |z| = {radius}")]
    NonMonotoneCounts { radius: f64, previous: i64, current: i64 },

    #[error("root {root} lies in the boundary-ambiguity annulus")]
    BoundaryAmbiguity { root: Complex64, roots: Vec<Complex64> },

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("critical-point census found {found} interior points, expected {expected}")]
    CensusMismatch {
        expected: usize,
        found: usize,
        roots: Vec<Complex64>,
    },

    #[error("not an automorphism: {reason}")]
    NotAnAutomorphism { reason: String, sup_error: Option<f64> },

    #[error("disc preservation violated by {map}: |f({z})| = {modulus}")]
    DiscViolation { map: String, z: Complex64, modulus: f64 },

    #[error("non-finite value produced by {map} at z = {z}")]
    NonFinite { map: String, z: Complex64 },

    #[error("map spec error at {path}: {message}")]
    SpecParse { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
