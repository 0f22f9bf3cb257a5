use num_complex::Complex64;

use super::MobiusAutomorphism;
use crate::error::{Error, Result};
use crate::map::DiscMapHandle;
use crate::numerics::ComplexPoint;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoverConfig {
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Below this `|α|` the rotation is read from `f'(0)` instead of `f(0)/(−α)`.
    pub small_alpha: f64,
    /// Largest acceptable sup-distance between `f` and the recovered map.
    pub max_sup_error: f64,
    /// Allowed deviation of the recovered `|λ|` from 1 before renormalizing.
    pub rotation_tol: f64,
    pub grid_radii: usize,
    pub grid_angles: usize,
    pub grid_max_radius: f64,
}

impl Default for RecoverConfig {
    fn default() -> Self {
        RecoverConfig {
            newton_tol: 1e-15,
            max_iter: 100,
            small_alpha: 1e-8,
            max_sup_error: 1e-8,
            rotation_tol: 1e-8,
            grid_radii: 10,
            grid_angles: 20,
            grid_max_radius: 0.95,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recovered {
    pub mobius: MobiusAutomorphism,
    /// Sup of `|f(z) − φ_{α,λ}(z)|` over the validation grid.
    pub sup_error: f64,
}

fn not_automorphism(reason: impl Into<String>, sup_error: Option<f64>) -> Error {
    Error::NotAnAutomorphism {
        reason: reason.into(),
        sup_error,
    }
}

/// Zero of `f` by Newton iteration, backtracking so that `|f|` decreases and
/// the iterate stays in the disc.
fn newton_zero(f: &DiscMapHandle, seed: ComplexPoint, cfg: &RecoverConfig) -> Result<ComplexPoint> {
    let mut z = seed;
    if z.norm() >= 1.0 {
        z *= 0.99 / z.norm();
    }
    let mut value = f.value(z)?;
    for _ in 0..cfg.max_iter {
        if value.norm() == 0.0 {
            return Ok(z);
        }
        let (_, deriv) = f.eval(z)?;
        if deriv.norm() == 0.0 {
            return Err(not_automorphism(
                format!("f'({z}) vanishes during Newton iteration"),
                None,
            ));
        }
        let step = value / deriv;
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-12 {
            let trial = z - step * t;
            if trial.norm() < 1.0 {
                let trial_value = f.value(trial)?;
                if trial_value.norm() < value.norm() {
                    accepted = Some((trial, trial_value));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((next, next_value)) = accepted else {
            // no descent possible: z is as good as the iteration can get
            return Ok(z);
        };
        let moved = (next - z).norm();
        z = next;
        value = next_value;
        if moved <= cfg.newton_tol * (1.0 + z.norm()) {
            return Ok(z);
        }
    }
    if value.norm() < 1e-12 {
        Ok(z)
    } else {
        Err(not_automorphism(
            format!("Newton iteration did not converge (|f| = {:e})", value.norm()),
            None,
        ))
    }
}

/// Recovers `α` and `λ` from a handle assumed to be a disc automorphism and
/// validates the fit on a polar grid.
pub fn mobius_recover(f: &DiscMapHandle, cfg: &RecoverConfig) -> Result<Recovered> {
    let (f0, df0) = f.eval(Complex64::new(0.0, 0.0))?;
    let seed = -f0 * (1.0 + f0.norm());
    let alpha = newton_zero(f, seed, cfg)?;
    let lambda = if alpha.norm() > cfg.small_alpha {
        f0 / (-alpha)
    } else {
        df0
    };
    if !(lambda.norm() > 0.0) || (lambda.norm() - 1.0).abs() > cfg.rotation_tol {
        return Err(not_automorphism(
            format!("recovered rotation has modulus {}", lambda.norm()),
            None,
        ));
    }
    let mobius = MobiusAutomorphism::new(alpha, lambda / lambda.norm())
        .map_err(|e| not_automorphism(format!("recovered parameters are invalid: {e}"), None))?;

    let mut sup_error: f64 = 0.0;
    for i in 0..cfg.grid_radii {
        let r = cfg.grid_max_radius * (i + 1) as f64 / cfg.grid_radii as f64;
        for j in 0..cfg.grid_angles {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / cfg.grid_angles as f64);
            let diff = (f.value(z)? - mobius.eval(z)?.0).norm();
            sup_error = sup_error.max(diff);
        }
    }
    if sup_error > cfg.max_sup_error {
        return Err(not_automorphism(
            format!("validation sup-error {sup_error:e} exceeds {:e}", cfg.max_sup_error),
            Some(sup_error),
        ));
    }
    Ok(Recovered { mobius, sup_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn opaque_round_trip() {
        let m = MobiusAutomorphism::new(c(0.3, 0.0), c(0.0, 1.0)).unwrap();
        let handle = DiscMapHandle::from_fn("opaque", move |z| m.eval(z).unwrap());
        let rec = mobius_recover(&handle, &RecoverConfig::default()).unwrap();
        assert!((rec.mobius.alpha() - c(0.3, 0.0)).norm() < 1e-10);
        assert!((rec.mobius.lambda() - c(0.0, 1.0)).norm() < 1e-10);
        assert!(rec.sup_error < 1e-10);
    }

    #[test]
    fn identity_recovered() {
        let rec = mobius_recover(&DiscMapHandle::identity(), &RecoverConfig::default()).unwrap();
        assert!(rec.mobius.alpha().norm() < 1e-12);
        assert!((rec.mobius.lambda() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn square_is_rejected() {
        let sq = DiscMapHandle::from_fn("z^2", |z| (z * z, 2.0 * z));
        // the direct sup check: z^2 differs from every rotation λz somewhere on the grid
        let direct = (0..20)
            .map(|j| Complex64::from_polar(0.95, std::f64::consts::TAU * j as f64 / 20.0))
            .map(|z| (z * z - z).norm())
            .fold(0.0, f64::max);
        assert!(direct > 1e-8);
        assert!(matches!(
            mobius_recover(&sq, &RecoverConfig::default()),
            Err(Error::NotAnAutomorphism { .. })
        ));
    }

    #[test]
    fn distant_alpha_with_rotation() {
        let m = MobiusAutomorphism::new(Complex64::from_polar(0.93, 2.0), Complex64::from_polar(1.0, -2.5)).unwrap();
        let handle = DiscMapHandle::from_fn("opaque", move |z| m.eval(z).unwrap());
        let rec = mobius_recover(&handle, &RecoverConfig::default()).unwrap();
        assert!((rec.mobius.alpha() - m.alpha()).norm() < 1e-10);
        assert!(rec.sup_error < 1e-9);
    }
}
