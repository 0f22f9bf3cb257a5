//! Explicit maps: the half map, the scaled exponential, a slit-disc Riemann
//! map and its powers, the atomic singular inner function, Frostman shifts and
//! an escaping Blaschke sequence.

mod slit;

pub use slit::{make_slit_g, make_slit_power, slit_g, slit_h, slit_power_preimage, SlitMap};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::discmaps::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::map::{DiscMapHandle, HolomorphicMap};
use crate::mapspec::{GallerySpec, MapSpec};
use crate::numerics::{ensure_finite, ComplexPoint};

pub const DEFAULT_EPSILON: f64 = 1e-10;
pub const DEFAULT_RATE: f64 = 10.0;

struct HalfMap;

impl HolomorphicMap for HalfMap {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        Ok((z * 0.5, Complex64::new(0.5, 0.0)))
    }

    fn describe(&self) -> String {
        "z/2".into()
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(MapSpec::Gallery(GallerySpec::Half))
    }
}

/// `z ↦ z/2`: injective, zero-free derivative, not onto.
pub fn make_half_map() -> DiscMapHandle {
    DiscMapHandle::new(HalfMap)
}

/// `z ↦ ε e^{cz}` with `ε e^c < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledExponential {
    epsilon: f64,
    c: f64,
}

impl ScaledExponential {
    pub fn new(epsilon: f64, c: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite() && c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("epsilon and c must be positive and finite"));
        }
        if epsilon * c.exp() >= 1.0 {
            return Err(Error::invalid(format!(
                "epsilon·e^c = {} does not keep the disc inside itself",
                epsilon * c.exp()
            )));
        }
        Ok(ScaledExponential { epsilon, c })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rate(&self) -> f64 {
        self.c
    }

    /// Every solution of `ε e^{cz} = w` in the open disc, by enumerating the
    /// branches `z = (ln(|w|/ε) + i(arg w + 2πk)) / c`.
    pub fn preimages(&self, w: ComplexPoint) -> Vec<ComplexPoint> {
        if w.norm() == 0.0 {
            return Vec::new();
        }
        let re = (w.norm() / self.epsilon).ln() / self.c;
        if re.abs() >= 1.0 {
            return Vec::new();
        }
        let k_max = (self.c / TAU).ceil() as i64 + 1;
        (-k_max..=k_max)
            .map(|k| Complex64::new(re, (w.arg() + TAU * k as f64) / self.c))
            .filter(|z| z.norm() < 1.0)
            .collect()
    }
}

impl HolomorphicMap for ScaledExponential {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        let v = (z * self.c).exp() * self.epsilon;
        Ok((v, v * self.c))
    }

    fn describe(&self) -> String {
        format!("{:e}·exp({}z)", self.epsilon, self.c)
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(MapSpec::Gallery(GallerySpec::ScaledExp {
            epsilon: self.epsilon,
            c: self.c,
        }))
    }
}

pub fn make_scaled_exponential(epsilon: f64, c: f64) -> Result<DiscMapHandle> {
    Ok(DiscMapHandle::new(ScaledExponential::new(epsilon, c)?))
}

struct PowerMap {
    base: DiscMapHandle,
    k: u32,
}

impl HolomorphicMap for PowerMap {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        let (b, db) = self.base.eval(z)?;
        let lower = b.powu(self.k - 1);
        Ok((lower * b, lower * db * self.k as f64))
    }

    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        Ok(self.base.value(z)?.powu(self.k))
    }

    fn describe(&self) -> String {
        format!("({})^{}", self.base.descriptor(), self.k)
    }

    fn spec(&self) -> Option<MapSpec> {
        match self.base.spec()? {
            MapSpec::Gallery(GallerySpec::SlitG) => Some(MapSpec::Gallery(GallerySpec::SlitPower { k: self.k })),
            _ => None,
        }
    }
}

/// `z ↦ base(z)^k` for `k ≥ 2`.
pub fn make_power_map(base: &DiscMapHandle, k: u32) -> Result<DiscMapHandle> {
    if k < 2 {
        return Err(Error::invalid(format!("power k = {k} must be at least 2")));
    }
    Ok(DiscMapHandle::new(PowerMap { base: base.clone(), k }))
}

/// `S(z) = exp((z + 1)/(z − 1))`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AtomicInner;

impl AtomicInner {
    /// Closed-form count of solutions of `S(z) = e^{−1}` in `|z| < r`:
    /// `2⌊r / (π√(1 − r²))⌋ + 1`.
    pub fn preimage_count_of_inverse_e(r: f64) -> i64 {
        2 * (r / (PI * (1.0 - r * r).sqrt())).floor() as i64 + 1
    }

    /// The solutions `z_k = πik / (πik − 1)` of `S(z) = e^{−1}`.
    pub fn preimage_of_inverse_e(k: i64) -> ComplexPoint {
        let t = Complex64::new(0.0, PI * k as f64);
        t / (t - 1.0)
    }
}

impl HolomorphicMap for AtomicInner {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        let d = z - 1.0;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { at: z });
        }
        let s = ((z + 1.0) / d).exp();
        Ok((s, s * (-2.0) / (d * d)))
    }

    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let d = z - 1.0;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { at: z });
        }
        Ok(((z + 1.0) / d).exp())
    }

    fn describe(&self) -> String {
        "exp((z+1)/(z-1))".into()
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(MapSpec::Gallery(GallerySpec::AtomicInner))
    }
}

pub fn make_atomic_inner() -> DiscMapHandle {
    DiscMapHandle::new(AtomicInner)
}

struct FrostmanShift {
    base: DiscMapHandle,
    a: ComplexPoint,
}

impl HolomorphicMap for FrostmanShift {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        let (f, df) = self.base.eval(z)?;
        let denom = Complex64::new(1.0, 0.0) - self.a.conj() * f;
        Ok(((self.a - f) / denom, df * (self.a.norm_sqr() - 1.0) / (denom * denom)))
    }

    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let f = self.base.value(z)?;
        Ok((self.a - f) / (Complex64::new(1.0, 0.0) - self.a.conj() * f))
    }

    fn describe(&self) -> String {
        format!("frostman(a={}, {})", self.a, self.base.descriptor())
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(MapSpec::Gallery(GallerySpec::Frostman {
            base: Box::new(self.base.spec()?),
            a: self.a,
        }))
    }
}

/// `F_a = (a − f)/(1 − ā f)`.
pub fn frostman_shift(f: &DiscMapHandle, a: ComplexPoint) -> Result<DiscMapHandle> {
    ensure_finite(a, "a")?;
    if a.norm() >= 1.0 {
        return Err(Error::invalid(format!("shift parameter {a} is not inside the disc")));
    }
    Ok(DiscMapHandle::new(FrostmanShift { base: f.clone(), a }))
}

struct EscapeMap {
    n: u32,
    product: BlaschkeProduct,
}

impl HolomorphicMap for EscapeMap {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        Ok(self.product.eval(z))
    }

    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        HolomorphicMap::value(&self.product, z)
    }

    fn describe(&self) -> String {
        format!("escape(n={})", self.n)
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(MapSpec::Gallery(GallerySpec::Escape { n: self.n }))
    }
}

/// Zeros `{0, 1 − 1/n}`, `λ = 1`.
pub fn escape_product(n: u32) -> Result<BlaschkeProduct> {
    if n < 2 {
        return Err(Error::invalid(format!("escape index n = {n} must be at least 2")));
    }
    BlaschkeProduct::new(
        Complex64::new(1.0, 0.0),
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0 - 1.0 / n as f64, 0.0)],
    )
}

/// `B_n` with zeros `{0, 1 − 1/n}`: converges to `−z` locally uniformly but
/// not uniformly, and one preimage of every target escapes to the boundary.
pub fn make_escape_sequence(n: u32) -> Result<DiscMapHandle> {
    Ok(DiscMapHandle::new(EscapeMap {
        n,
        product: escape_product(n)?,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valence::{default_schedule, valence_at, valence_profile, ValenceOptions, WindingOptions};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_map_values() {
        let f = make_half_map();
        assert_eq!(f.value(c(0.8, 0.0)).unwrap(), c(0.4, 0.0));
        let opts = ValenceOptions::default();
        assert_eq!(
            valence_at(&f, c(0.3, 0.0), &default_schedule(), &opts).unwrap().value,
            1
        );
        // 0.7 is outside the image disc of radius 1/2
        assert_eq!(
            valence_at(&f, c(0.7, 0.0), &default_schedule(), &opts).unwrap().value,
            0
        );
    }

    #[test]
    fn scaled_exponential_basics() {
        let f = make_scaled_exponential(DEFAULT_EPSILON, DEFAULT_RATE).unwrap();
        assert_eq!(f.value(c(0.0, 0.0)).unwrap(), c(1e-10, 0.0));
        // |f| = ε e^{c Re z} is largest at z → 1
        let bound = 1e-10 * 10f64.exp();
        assert!((bound - 2.2026e-6).abs() < 1e-9);
        for k in 0..100 {
            let z = Complex64::from_polar(0.999, TAU * k as f64 / 100.0);
            assert!(f.value(z).unwrap().norm() <= bound);
        }
        assert!(make_scaled_exponential(1.0, 10.0).is_err());
        assert!(make_scaled_exponential(-1.0, 1.0).is_err());
    }

    #[test]
    fn scaled_exponential_branches() {
        let se = ScaledExponential::new(DEFAULT_EPSILON, DEFAULT_RATE).unwrap();
        let pre = se.preimages(c(1e-10, 0.0));
        assert_eq!(pre.len(), 3);
        assert_eq!(se.preimages(c(-1e-10, 0.0)).len(), 4);
        for z in pre {
            let v = HolomorphicMap::value(&se, z).unwrap();
            assert!((v - c(1e-10, 0.0)).norm() < 1e-22);
        }
    }

    #[test]
    fn scaled_exponential_valence_matches_branches() {
        let se = ScaledExponential::new(DEFAULT_EPSILON, DEFAULT_RATE).unwrap();
        let f = DiscMapHandle::new(se);
        let opts = ValenceOptions::default();
        for (w, expected) in [(c(1e-10, 0.0), 3), (c(-1e-10, 0.0), 4)] {
            let rep = valence_at(&f, w, &default_schedule(), &opts).unwrap();
            assert_eq!(rep.value, expected);
            assert_eq!(rep.value, se.preimages(w).len() as i64);
            assert!(rep.stabilized);
        }
    }

    #[test]
    fn atomic_inner_profile_grows() {
        let w = c((-1f64).exp(), 0.0);
        let radii = [0.9, 0.99, 0.999];
        let profile = valence_profile(&make_atomic_inner(), w, &radii, &WindingOptions::default()).unwrap();
        let counts: Vec<i64> = profile.iter().map(|p| p.1).collect();
        assert_eq!(counts, vec![1, 5, 15]);
        for (r, n) in profile {
            assert_eq!(n, AtomicInner::preimage_count_of_inverse_e(r));
        }
    }

    #[test]
    fn atomic_inner_values() {
        let (s, ds) = make_atomic_inner().eval(c(0.0, 0.0)).unwrap();
        assert!((s.re - (-1f64).exp()).abs() < 1e-15 && s.im == 0.0);
        assert!((ds - c(-2.0 * (-1f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn atomic_inner_count_formula_matches_enumeration() {
        for r in [0.9, 0.99, 0.999, 0.5, 0.97] {
            let enumerated = (-10_000..=10_000)
                .map(AtomicInner::preimage_of_inverse_e)
                .filter(|z| z.norm() < r)
                .count() as i64;
            assert_eq!(AtomicInner::preimage_count_of_inverse_e(r), enumerated, "r = {r}");
        }
        assert_eq!(AtomicInner::preimage_count_of_inverse_e(0.9), 1);
        assert_eq!(AtomicInner::preimage_count_of_inverse_e(0.99), 5);
        assert_eq!(AtomicInner::preimage_count_of_inverse_e(0.999), 15);
        let s = make_atomic_inner();
        let z = AtomicInner::preimage_of_inverse_e(3);
        assert!((s.value(z).unwrap() - c((-1f64).exp(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn frostman_zero_shift_negates() {
        let s = make_atomic_inner();
        let f = frostman_shift(&s, c(0.0, 0.0)).unwrap();
        let z = c(0.3, -0.4);
        assert!((f.value(z).unwrap() + s.value(z).unwrap()).norm() < 1e-15);
        assert!(frostman_shift(&s, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn frostman_vanishes_at_preimages_of_a() {
        // f = z^2 takes the value a = 0.09 at z = 0.3
        let f = DiscMapHandle::new(BlaschkeProduct::monomial(2));
        let shifted = frostman_shift(&f, c(0.09, 0.0)).unwrap();
        assert!(shifted.value(c(0.3, 0.0)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn frostman_distance_bound() {
        let s = make_atomic_inner();
        for a in [c(1e-3, 0.0), c(0.05, 0.02), c(-0.2, 0.1)] {
            let f = frostman_shift(&s, a).unwrap();
            let bound = 2.0 * a.norm() / (1.0 - a.norm());
            for k in 0..400 {
                let z = Complex64::from_polar(0.99 * ((k % 20) as f64 + 0.5) / 20.0, 0.37 * k as f64);
                let d = (f.value(z).unwrap() + s.value(z).unwrap()).norm();
                assert!(d <= bound, "{d} > {bound}");
            }
        }
    }

    #[test]
    fn escape_construction() {
        let b = escape_product(2).unwrap();
        assert_eq!(b.zeros(), &[c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(make_escape_sequence(1).is_err());
        let opts = ValenceOptions::default();
        for n in [2, 10, 100] {
            let f = make_escape_sequence(n).unwrap();
            let rep = valence_at(&f, c(0.1, 0.0), &default_schedule(), &opts).unwrap();
            assert_eq!(rep.value, 2, "n = {n}");
        }
    }

    #[test]
    fn power_requires_k_two() {
        assert!(make_power_map(&make_half_map(), 1).is_err());
        let sq = make_power_map(&make_half_map(), 2).unwrap();
        let (v, d) = sq.eval(c(0.4, 0.0)).unwrap();
        assert!((v - c(0.04, 0.0)).norm() < 1e-16);
        assert!((d - c(0.2, 0.0)).norm() < 1e-16);
    }
}
