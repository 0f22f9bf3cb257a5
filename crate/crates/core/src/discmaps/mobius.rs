use num_complex::Complex64;

use super::{BlaschkeProduct, INTERIOR_MARGIN, UNIMODULAR_TOL};
use crate::error::{Error, Result};
use crate::map::HolomorphicMap;
use crate::mapspec::MapSpec;
use crate::numerics::{ensure_finite, ComplexPoint};

/// The disc automorphism `z ↦ λ (z − α) / (1 − ᾱ z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusAutomorphism {
    alpha: ComplexPoint,
    lambda: ComplexPoint,
}

impl MobiusAutomorphism {
    pub fn new(alpha: ComplexPoint, lambda: ComplexPoint) -> Result<Self> {
        ensure_finite(alpha, "alpha")?;
        ensure_finite(lambda, "lambda")?;
        if alpha.norm() >= 1.0 - INTERIOR_MARGIN {
            return Err(Error::invalid(format!(
                "|alpha| = {} is not inside the disc",
                alpha.norm()
            )));
        }
        if (lambda.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::invalid(format!(
                "|lambda| = {} is not unimodular",
                lambda.norm()
            )));
        }
        Ok(MobiusAutomorphism { alpha, lambda })
    }

    pub fn identity() -> Self {
        MobiusAutomorphism {
            alpha: Complex64::new(0.0, 0.0),
            lambda: Complex64::new(1.0, 0.0),
        }
    }

    pub fn alpha(&self) -> ComplexPoint {
        self.alpha
    }

    pub fn lambda(&self) -> ComplexPoint {
        self.lambda
    }

    /// Value and derivative. Boundary points are accepted for diagnostics; the
    /// only failure is the pole `ᾱ z = 1`.
    pub fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        let denom = Complex64::new(1.0, 0.0) - self.alpha.conj() * z;
        if denom == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { at: z });
        }
        let value = self.lambda * (z - self.alpha) / denom;
        let deriv = self.lambda * (1.0 - self.alpha.norm_sqr()) / (denom * denom);
        Ok((value, deriv))
    }

    /// `m⁻¹`, with `α' = −λα` and `λ' = λ̄`.
    pub fn inverse(&self) -> MobiusAutomorphism {
        MobiusAutomorphism {
            alpha: -self.lambda * self.alpha,
            lambda: self.lambda.conj(),
        }
    }

    pub fn to_blaschke(&self) -> BlaschkeProduct {
        BlaschkeProduct::from_parts_unchecked(self.lambda, vec![self.alpha])
    }

    pub fn to_spec(&self) -> MapSpec {
        MapSpec::Mobius {
            alpha: self.alpha,
            lambda: self.lambda,
        }
    }
}

impl HolomorphicMap for MobiusAutomorphism {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        MobiusAutomorphism::eval(self, z)
    }

    fn describe(&self) -> String {
        format!("mobius(alpha={}, lambda={})", self.alpha, self.lambda)
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(self.to_spec())
    }
}

pub fn mobius_eval(m: &MobiusAutomorphism, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
    m.eval(z)
}

pub fn mobius_inverse(m: &MobiusAutomorphism) -> MobiusAutomorphism {
    m.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eval() {
        let (v, d) = MobiusAutomorphism::identity().eval(c(0.0, 0.7)).unwrap();
        assert_eq!(v, c(0.0, 0.7));
        assert_eq!(d, c(1.0, 0.0));
    }

    #[test]
    fn alpha_half_values() {
        let m = MobiusAutomorphism::new(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let (v, d) = m.eval(c(0.5, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
        assert!((d - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        let (v, d) = m.eval(c(0.0, 0.0)).unwrap();
        assert!((v - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((d - c(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn boundary_pole() {
        let m = MobiusAutomorphism::new(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        // 1 - ᾱz vanishes at z = 2, outside the disc; on the boundary no pole exists
        assert!(m.eval(c(1.0, 0.0)).is_ok());
        assert!(matches!(m.eval(c(2.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn invariants_enforced() {
        assert!(MobiusAutomorphism::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(MobiusAutomorphism::new(c(0.2, 0.0), c(1.1, 0.0)).is_err());
        assert!(MobiusAutomorphism::new(c(f64::NAN, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn inverse_of_identity() {
        assert_eq!(MobiusAutomorphism::identity().inverse(), MobiusAutomorphism::identity());
    }

    #[test]
    fn inverse_undoes_shift() {
        let m = MobiusAutomorphism::new(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let (z, _) = m.inverse().eval(c(-0.5, 0.0)).unwrap();
        assert!(z.norm() < 1e-15);
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let alpha = Complex64::from_polar(0.95 * rng.random::<f64>().sqrt(), rng.random::<f64>() * 6.3);
            let lambda = Complex64::from_polar(1.0, rng.random::<f64>() * 6.3);
            let m = MobiusAutomorphism::new(alpha, lambda).unwrap();
            let inv = m.inverse();
            for _ in 0..100 {
                let z = Complex64::from_polar(0.99 * rng.random::<f64>().sqrt(), rng.random::<f64>() * 6.3);
                let back = inv.eval(m.eval(z).unwrap().0).unwrap().0;
                assert!((back - z).norm() < 1e-12, "{back} vs {z}");
            }
        }
    }
}
