use num_complex::Complex64;

use super::{INTERIOR_MARGIN, ROOT_IN_DISC, UNIMODULAR_TOL};
use crate::error::{Error, Result};
use crate::map::HolomorphicMap;
use crate::mapspec::MapSpec;
use crate::numerics::{aberth_roots, ensure_finite, poly_from_roots, ComplexPoint, Polynomial, RootConfig, RootSet};

/// Probe point used to recover the unimodular constant of a composition.
pub const COMPOSE_PROBE: Complex64 = Complex64::new(0.137, 0.271);

/// Preimages must satisfy `|B(root) − w|` below this.
pub const PREIMAGE_RESIDUAL: f64 = 1e-8;

/// `|z − a_j|` below which evaluation switches to the product rule.
const LOG_DERIVATIVE_FLOOR: f64 = 1e-8;

/// `λ ∏ (z − a_j) / (1 − ā_j z)` with every `|a_j| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    lambda: ComplexPoint,
    zeros: Vec<ComplexPoint>,
}

impl BlaschkeProduct {
    pub fn new(lambda: ComplexPoint, zeros: Vec<ComplexPoint>) -> Result<Self> {
        ensure_finite(lambda, "lambda")?;
        if (lambda.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::invalid(format!(
                "|lambda| = {} is not unimodular",
                lambda.norm()
            )));
        }
        for a in &zeros {
            ensure_finite(*a, "zero")?;
            if a.norm() >= 1.0 - INTERIOR_MARGIN {
                return Err(Error::invalid(format!("zero {a} is not inside the disc")));
            }
        }
        Ok(BlaschkeProduct { lambda, zeros })
    }

    pub(crate) fn from_parts_unchecked(lambda: ComplexPoint, zeros: Vec<ComplexPoint>) -> Self {
        BlaschkeProduct { lambda, zeros }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        BlaschkeProduct {
            lambda: Complex64::new(1.0, 0.0),
            zeros: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn lambda(&self) -> ComplexPoint {
        self.lambda
    }

    pub fn zeros(&self) -> &[ComplexPoint] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: ComplexPoint) -> (ComplexPoint, ComplexPoint) {
        let one = Complex64::new(1.0, 0.0);
        if self.zeros.iter().any(|a| (z - a).norm() < LOG_DERIVATIVE_FLOOR) {
            return self.eval_product_rule(z);
        }
        let mut value = self.lambda;
        let mut log_deriv = Complex64::new(0.0, 0.0);
        for a in &self.zeros {
            let denom = one - a.conj() * z;
            value *= (z - a) / denom;
            log_deriv += (z - a).inv() + a.conj() / denom;
        }
        (value, value * log_deriv)
    }

    fn eval_product_rule(&self, z: ComplexPoint) -> (ComplexPoint, ComplexPoint) {
        let one = Complex64::new(1.0, 0.0);
        let mut value = self.lambda;
        let mut deriv = Complex64::new(0.0, 0.0);
        for a in &self.zeros {
            let denom = one - a.conj() * z;
            let factor = (z - a) / denom;
            let factor_deriv = (1.0 - a.norm_sqr()) / (denom * denom);
            deriv = deriv * factor + value * factor_deriv;
            value *= factor;
        }
        (value, deriv)
    }

    /// `λ ∏ (z − a_j)`.
    pub fn numerator(&self) -> Polynomial {
        poly_from_roots(&self.zeros, self.lambda).expect("lambda is unimodular")
    }

    /// `∏ (1 − ā_j z)`.
    pub fn denominator(&self) -> Polynomial {
        self.zeros
            .iter()
            .fold(Polynomial::constant(Complex64::new(1.0, 0.0)), |acc, a| {
                &acc * &Polynomial::normalized(vec![Complex64::new(1.0, 0.0), -a.conj()])
            })
    }

    pub fn to_spec(&self) -> MapSpec {
        MapSpec::Blaschke {
            lambda: self.lambda,
            zeros: self.zeros.clone(),
        }
    }
}

impl HolomorphicMap for BlaschkeProduct {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        Ok(BlaschkeProduct::eval(self, z))
    }

    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let one = Complex64::new(1.0, 0.0);
        Ok(self
            .zeros
            .iter()
            .fold(self.lambda, |acc, a| acc * (z - a) / (one - a.conj() * z)))
    }

    fn describe(&self) -> String {
        format!("blaschke(degree={}, lambda={})", self.degree(), self.lambda)
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(self.to_spec())
    }
}

pub fn blaschke_eval(b: &BlaschkeProduct, z: ComplexPoint) -> (ComplexPoint, ComplexPoint) {
    b.eval(z)
}

/// Classifies a root against the unit circle; the annulus between the two
/// margins is reported as a boundary ambiguity.
fn inside_disc(root: ComplexPoint, all: &RootSet) -> Result<bool> {
    let r = root.norm();
    if r < 1.0 - ROOT_IN_DISC {
        Ok(true)
    } else if r > 1.0 + ROOT_IN_DISC {
        Ok(false)
    } else {
        Err(Error::BoundaryAmbiguity {
            root,
            roots: all.values().collect(),
        })
    }
}

/// All solutions of `B(z) = w` in the disc, with multiplicity.
pub fn blaschke_preimages(b: &BlaschkeProduct, w: ComplexPoint, cfg: &RootConfig) -> Result<RootSet> {
    ensure_finite(w, "target")?;
    if w.norm() >= 1.0 {
        return Err(Error::invalid(format!("target {w} is not inside the disc")));
    }
    if b.degree() == 0 {
        return Err(Error::invalid("preimages need degree >= 1"));
    }
    let p = &b.numerator() - &b.denominator().scale(w);
    if p.degree() != b.degree() {
        return Err(Error::InternalConsistency(format!(
            "preimage polynomial has degree {} for a degree-{} product",
            p.degree(),
            b.degree()
        )));
    }
    let mut set = aberth_roots(&p, cfg)?;
    for entry in set.roots.iter_mut().filter(|e| e.multiplicity == 1) {
        entry.value = polish(b, w, entry.value);
    }
    for entry in &set.roots {
        if !inside_disc(entry.value, &set)? {
            return Err(Error::InternalConsistency(format!(
                "preimage {} of {w} lies outside the disc",
                entry.value
            )));
        }
    }
    set.residuals = set.roots.iter().map(|e| (b.eval(e.value).0 - w).norm()).collect();
    if let Some(bad) = set.residuals.iter().position(|r| *r >= PREIMAGE_RESIDUAL) {
        return Err(Error::InternalConsistency(format!(
            "preimage {} has residual {:e}",
            set.roots[bad].value, set.residuals[bad]
        )));
    }
    Ok(set)
}

/// A few Newton steps on `B − w` itself, kept only while they reduce the residual.
fn polish(b: &BlaschkeProduct, w: ComplexPoint, mut z: ComplexPoint) -> ComplexPoint {
    let mut residual = (b.eval(z).0 - w).norm();
    for _ in 0..3 {
        let (v, d) = b.eval(z);
        let next = z - (v - w) / d;
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        let next_residual = (b.eval(next).0 - w).norm();
        if next_residual >= residual {
            break;
        }
        z = next;
        residual = next_residual;
    }
    z
}

/// `outer ∘ inner` as a Blaschke product of degree `deg(outer)·deg(inner)`.
pub fn blaschke_compose(outer: &BlaschkeProduct, inner: &BlaschkeProduct, cfg: &RootConfig) -> Result<BlaschkeProduct> {
    if outer.degree() == 0 || inner.degree() == 0 {
        return Err(Error::invalid("composition needs both degrees >= 1"));
    }
    let mut zeros = Vec::with_capacity(outer.degree() * inner.degree());
    for a in outer.zeros() {
        zeros.extend(blaschke_preimages(inner, *a, cfg)?.with_multiplicity());
    }
    let unnormalized = BlaschkeProduct::from_parts_unchecked(Complex64::new(1.0, 0.0), zeros);
    let target = outer.eval(inner.eval(COMPOSE_PROBE).0).0;
    let base = unnormalized.eval(COMPOSE_PROBE).0;
    let lambda = target / base;
    if !(lambda.re.is_finite() && lambda.im.is_finite()) || lambda.norm() == 0.0 {
        return Err(Error::InternalConsistency(format!(
            "probe point {COMPOSE_PROBE} cannot recover the unimodular constant"
        )));
    }
    BlaschkeProduct::new(lambda / lambda.norm(), unnormalized.zeros)
}

/// Numerator `N'D − ND'` of `B'`, truncated to its exact degree bound `2n − 2`.
pub fn critical_numerator(b: &BlaschkeProduct) -> Polynomial {
    let n = b.degree();
    let num = b.numerator();
    let den = b.denominator();
    let full = &(&num.derivative() * &den) - &(&num * &den.derivative());
    full.truncate_degree((2 * n).saturating_sub(2)).trim_relative(1e-13)
}

/// Critical points of `B` inside the disc, with multiplicity. A degree-`n`
/// product always has exactly `n − 1` of them.
pub fn blaschke_critical_points(b: &BlaschkeProduct, cfg: &RootConfig) -> Result<RootSet> {
    let n = b.degree();
    if n == 0 {
        return Err(Error::invalid("critical points need degree >= 1"));
    }
    let p = critical_numerator(b);
    if p.degree() == 0 {
        // degree 1: N'D − ND' is the constant λ(1 − |a|²)
        return Ok(RootSet {
            roots: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
        });
    }
    let all = aberth_roots(&p, cfg)?;
    let mut interior = Vec::new();
    for entry in &all.roots {
        interior.push(inside_disc(entry.value, &all)?);
    }
    let mut flags = interior.into_iter();
    let census = all.filter(|_| flags.next().unwrap_or(false));
    if census.multiplicity_sum() != n - 1 {
        return Err(Error::CensusMismatch {
            expected: n - 1,
            found: census.multiplicity_sum(),
            roots: all.with_multiplicity(),
        });
    }
    Ok(census)
}

/// All roots of [`critical_numerator`], interior and reflected.
pub fn critical_numerator_roots(b: &BlaschkeProduct, cfg: &RootConfig) -> Result<RootSet> {
    let p = critical_numerator(b);
    if p.degree() == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
        });
    }
    aberth_roots(&p, cfg)
}
