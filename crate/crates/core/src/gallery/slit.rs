//! Riemann map `g` of the disc onto `Ω = D ∖ [0, 1)` through an explicit chain
//! of elementary maps, and its inverse `h`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::make_power_map;
use crate::error::{Error, Result};
use crate::map::{DiscMapHandle, HolomorphicMap};
use crate::mapspec::{GallerySpec, MapSpec};
use crate::numerics::{ensure_finite, ComplexPoint};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `u ↦ q = i(1+u)/(1−u) ↦ s = √q ↦ w = (s−1)/(s+1) ↦ z = w²`, with the
/// principal root (`q` stays in the upper half-plane).
pub fn slit_g(u: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
    ensure_finite(u, "u")?;
    let d = ONE - u;
    if d == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { at: u });
    }
    let q = I * (ONE + u) / d;
    let dq = I * 2.0 / (d * d);
    let s = q.sqrt();
    let ds = dq / (s * 2.0);
    let sp = s + 1.0;
    let w = (s - 1.0) / sp;
    let dw = ds * 2.0 / (sp * sp);
    Ok((w * w, w * dw * 2.0))
}

fn on_slit(z: ComplexPoint) -> bool {
    z.im == 0.0 && z.re >= 0.0 && z.re < 1.0
}

/// Inverse of [`slit_g`]: `s = √z` with `arg ∈ [0, 2π)`, `m = (1+s)/(1−s)`,
/// `q = m²`, `u = (q−i)/(q+i)`.
pub fn slit_h(z: ComplexPoint) -> Result<ComplexPoint> {
    ensure_finite(z, "z")?;
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("{z} is not inside the unit disc")));
    }
    if on_slit(z) {
        return Err(Error::Domain(format!("{z} lies on the slit [0, 1)")));
    }
    let mut phi = z.arg();
    if phi < 0.0 {
        phi += TAU;
    }
    let s = Complex64::from_polar(z.norm().sqrt(), phi / 2.0);
    let m = (ONE + s) / (ONE - s);
    let q = m * m;
    Ok((q - I) / (q + I))
}

/// The handle form of [`slit_g`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SlitMap;

impl HolomorphicMap for SlitMap {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        slit_g(z)
    }

    fn describe(&self) -> String {
        "slit-disc Riemann map g".into()
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(MapSpec::Gallery(GallerySpec::SlitG))
    }
}

pub fn make_slit_g() -> DiscMapHandle {
    DiscMapHandle::new(SlitMap)
}

/// `g^k`.
pub fn make_slit_power(k: u32) -> Result<DiscMapHandle> {
    make_power_map(&make_slit_g(), k)
}

/// Exact membership test for the image of `g^k`: returns a `u` in the disc
/// with `g(u)^k = w` if some `k`-th root of `w` lies in `Ω`, else `None`.
/// Every `w ≠ 0` in the disc has such a root, `w = 0` has none.
pub fn slit_power_preimage(w: ComplexPoint, k: u32) -> Option<ComplexPoint> {
    if k == 0 || !(w.norm() < 1.0) || w.norm() == 0.0 {
        return None;
    }
    let modulus = w.norm().powf(1.0 / k as f64);
    (0..k)
        .map(|j| Complex64::from_polar(modulus, (w.arg() + TAU * j as f64) / k as f64))
        .find(|root| root.norm() < 1.0 && !on_slit(*root))
        .and_then(|root| slit_h(root).ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
        let r = rmax * rng.random::<f64>().sqrt();
        Complex64::from_polar(r, TAU * rng.random::<f64>())
    }

    #[test]
    fn value_at_origin() {
        // q = i, s = e^{iπ/4}, w = (√2 − 1)i, z = −(√2 − 1)²
        let expected = -(3.0 - 2.0 * 2f64.sqrt());
        let (g0, _) = slit_g(c(0.0, 0.0)).unwrap();
        assert!((g0 - c(expected, 0.0)).norm() < 1e-15);
        assert!((expected + 0.171573).abs() < 1e-6);
        assert!(slit_h(c(expected, 0.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let u = sample(&mut rng, 0.99);
            let (z, _) = slit_g(u).unwrap();
            assert!(z.norm() < 1.0 && !on_slit(z) && z.norm() > 0.0);
            assert!((slit_h(z).unwrap() - u).norm() < 1e-9, "u = {u}");
        }
        for _ in 0..1000 {
            let z = sample(&mut rng, 0.999);
            let u = slit_h(z).unwrap();
            assert!(u.norm() < 1.0);
            assert!((slit_g(u).unwrap().0 - z).norm() < 1e-9, "z = {z}");
        }
    }

    #[test]
    fn inverse_domain() {
        assert!(matches!(slit_h(c(0.5, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(slit_h(c(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(slit_h(c(1.2, 0.0)), Err(Error::Domain(_))));
        assert!(slit_h(c(-0.5, 0.0)).unwrap().norm() < 1.0);
        assert!(matches!(slit_g(c(1.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let z = c(0.0, 0.2);
        let h = 1e-6;
        let (_, d) = slit_g(z).unwrap();
        let fd = (slit_g(z + h).unwrap().0 - slit_g(z - h).unwrap().0) / (2.0 * h);
        assert!((fd - d).norm() < 1e-6);
    }

    #[test]
    fn square_at_origin() {
        let f = make_slit_power(2).unwrap();
        let v = f.value(c(0.0, 0.0)).unwrap();
        // 17 − 12√2 loses two digits to cancellation
        assert!((v - c(17.0 - 12.0 * 2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((v.re - 0.029437).abs() < 1e-6);
    }

    #[test]
    fn power_membership_oracle() {
        assert!(slit_power_preimage(c(0.0, 0.0), 2).is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in [2, 3, 5] {
            let f = make_slit_power(k).unwrap();
            for _ in 0..200 {
                let w = sample(&mut rng, 0.99);
                let u = slit_power_preimage(w, k).expect("nonzero w must be attained");
                assert!(u.norm() < 1.0);
                assert!((f.value(u).unwrap() - w).norm() < 1e-9);
            }
            // positive reals are attained through a non-principal root
            assert!(slit_power_preimage(c(0.25, 0.0), k).is_some());
        }
    }

    #[test]
    fn derivative_bounded_below() {
        let f = make_slit_power(2).unwrap();
        let mut min = f64::INFINITY;
        for a in 0..20 {
            for r in 0..25 {
                let z = Complex64::from_polar(0.95 * (r as f64 + 0.5) / 25.0, TAU * a as f64 / 20.0);
                min = min.min(f.eval(z).unwrap().1.norm());
            }
        }
        assert!(min > 1e-6, "min |f'| = {min}");
    }
}
