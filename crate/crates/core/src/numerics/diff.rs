use num_complex::Complex64;

use super::ComplexPoint;
use crate::error::{Error, Result};
use crate::map::DiscMapHandle;

/// Denominator floor for the relative error.
pub const DERIVATIVE_EPS: f64 = f64::EPSILON;

/// Relative disagreement between a map's analytic derivative and a central
/// difference averaged over the real and imaginary directions.
pub fn derivative_consistency(map: &DiscMapHandle, z: ComplexPoint, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("step h must be positive"));
    }
    let steps = [Complex64::new(h, 0.0), Complex64::new(0.0, h)];
    for s in steps {
        for p in [z + s, z - s] {
            if p.norm() >= 1.0 {
                return Err(Error::invalid(format!("stencil point {p} leaves the open disc")));
            }
        }
    }
    let (_, analytic) = map.eval(z)?;
    let mut estimate = Complex64::new(0.0, 0.0);
    for s in steps {
        let forward = map.value(z + s)?;
        let backward = map.value(z - s)?;
        estimate += (forward - backward) / (2.0 * s);
    }
    estimate /= 2.0;
    Ok((analytic - estimate).norm() / analytic.norm().max(DERIVATIVE_EPS))
}
