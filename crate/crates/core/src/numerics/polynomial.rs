use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::{ensure_finite, ComplexPoint};
use crate::error::{Error, Result};

/// Dense polynomial over complex scalars; `coeffs[k]` multiplies `z^k`.
///
/// The representation is normalized: the last coefficient is nonzero unless
/// the polynomial is identically zero, in which case `coeffs == [0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<ComplexPoint>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<ComplexPoint>) -> Result<Self> {
        for c in &coeffs {
            ensure_finite(*c, "polynomial coefficient")?;
        }
        Ok(Self::normalized(coeffs))
    }

    pub(crate) fn normalized(mut coeffs: Vec<ComplexPoint>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: ComplexPoint) -> Self {
        Self::normalized(vec![c])
    }

    /// `z`.
    pub fn identity() -> Self {
        Polynomial {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn coeffs(&self) -> &[ComplexPoint] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> ComplexPoint {
        *self.coeffs.last().expect("normalized polynomial is never empty")
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::constant(Complex64::new(0.0, 0.0));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        Polynomial::normalized(coeffs)
    }

    pub fn scale(&self, s: ComplexPoint) -> Polynomial {
        Polynomial::normalized(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Value and first derivative by a simultaneous Horner pass.
    pub fn eval(&self, z: ComplexPoint) -> (ComplexPoint, ComplexPoint) {
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            deriv = deriv * z + value;
            value = value * z + c;
        }
        (value, deriv)
    }

    /// `Σ |a_k| |z|^k`, the magnitude bound Horner rounding error scales with.
    pub fn backward_scale(&self, z: ComplexPoint) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// `Σ |a_k| max(1, |z|)^k`, the absolute coefficient scale used to certify roots.
    pub fn coefficient_scale(&self, z: ComplexPoint) -> f64 {
        let r = z.norm().max(1.0);
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops trailing coefficients whose magnitude is at most `rel` times the
    /// largest coefficient.
    pub(crate) fn trim_relative(&self, rel: f64) -> Polynomial {
        let floor = rel * self.max_coefficient();
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= floor) {
            coeffs.pop();
        }
        Polynomial::normalized(coeffs)
    }

    pub(crate) fn truncate_degree(&self, max_degree: usize) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(max_degree + 1);
        Polynomial::normalized(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})·z")?,
                _ => write!(f, "({c})·z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(zero) + rhs.coeffs.get(k).copied().unwrap_or(zero))
            .collect();
        Polynomial::normalized(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::normalized(coeffs)
    }
}

/// `leading · ∏ (z − root_j)`, expanded by iterated convolution.
pub fn poly_from_roots(roots: &[ComplexPoint], leading: ComplexPoint) -> Result<Polynomial> {
    ensure_finite(leading, "leading coefficient")?;
    if leading == Complex64::new(0.0, 0.0) {
        return Err(Error::invalid("leading coefficient must be nonzero"));
    }
    let mut coeffs = vec![leading];
    for &r in roots {
        ensure_finite(r, "root")?;
        // multiply by (z - r) in place
        coeffs.push(Complex64::new(0.0, 0.0));
        for k in (0..coeffs.len()).rev() {
            let lower = if k > 0 { coeffs[k - 1] } else { Complex64::new(0.0, 0.0) };
            coeffs[k] = lower - r * coeffs[k];
        }
    }
    Ok(Polynomial::normalized(coeffs))
}

pub fn poly_eval(p: &Polynomial, z: ComplexPoint) -> (ComplexPoint, ComplexPoint) {
    p.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Schoolbook expansion of a product of linear factors, kept separate from
    /// the in-place recurrence used by `poly_from_roots`.
    fn convolve_factors(roots: &[Complex64], leading: Complex64) -> Vec<Complex64> {
        let mut acc = vec![leading];
        for r in roots {
            let factor = [-r, c(1.0, 0.0)];
            let mut next = vec![c(0.0, 0.0); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in factor.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn empty_product_is_leading_constant() {
        let p = poly_from_roots(&[], c(1.0, 0.0)).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn difference_of_squares() {
        let p = poly_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_eq!(p.coeffs(), &[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn scaled_pair_matches_convolution_oracle() {
        let roots = [c(0.5, 0.0), c(-0.5, 0.0)];
        let oracle = convolve_factors(&roots, c(2.0, 0.0));
        assert_eq!(oracle, vec![c(-0.5, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let p = poly_from_roots(&roots, c(2.0, 0.0)).unwrap();
        assert_eq!(p.coeffs(), oracle.as_slice());
    }

    #[test]
    fn zero_leading_rejected() {
        assert!(matches!(
            poly_from_roots(&[c(1.0, 0.0)], c(0.0, 0.0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn horner_value_and_derivative() {
        let p = poly_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_eq!(poly_eval(&p, c(2.0, 0.0)), (c(3.0, 0.0), c(4.0, 0.0)));

        let k = Polynomial::constant(c(0.3, -2.0));
        assert_eq!(k.eval(c(0.7, 0.1)), (c(0.3, -2.0), c(0.0, 0.0)));

        let cube = poly_from_roots(&[c(0.0, 0.0); 3], c(1.0, 0.0)).unwrap();
        let (v, d) = cube.eval(c(0.0, 1.0));
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
        assert!((d - c(-3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn arithmetic_normalizes() {
        let a = poly_from_roots(&[c(1.0, 0.0)], c(1.0, 0.0)).unwrap();
        let diff = &a - &a;
        assert!(diff.is_zero());
        assert_eq!(diff.degree(), 0);
        let sq = &a * &a;
        assert_eq!(sq.coeffs(), &[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(sq.derivative().coeffs(), &[c(-2.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn non_finite_coefficients_rejected() {
        assert!(Polynomial::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(poly_from_roots(&[c(f64::INFINITY, 0.0)], c(1.0, 0.0)).is_err());
    }
}
