//! Complex polynomial algebra, simultaneous root finding and a
//! finite-difference derivative check shared by the other modules.

mod diff;
mod polynomial;
mod roots;

pub use diff::{derivative_consistency, DERIVATIVE_EPS};
pub use polynomial::{poly_eval, poly_from_roots, Polynomial};
pub use roots::{aberth_roots, RootConfig, RootEntry, RootSet};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The universal scalar: a point of the complex plane.
pub type ComplexPoint = Complex64;

pub(crate) fn ensure_finite(z: ComplexPoint, what: &str) -> Result<ComplexPoint> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::invalid(format!("{what} must be finite, got {z}")))
    }
}

/// `e^{iθ}`.
pub fn unit(theta: f64) -> ComplexPoint {
    Complex64::from_polar(1.0, theta)
}
