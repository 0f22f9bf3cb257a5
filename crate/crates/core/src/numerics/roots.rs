//! Aberth–Ehrlich simultaneous iteration.

use num_complex::Complex64;

use super::{ComplexPoint, Polynomial};
use crate::error::{Error, Result};

/// Solver tolerances. Every threshold used by [`aberth_roots`] lives here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootConfig {
    /// Per-root stopping and certification tolerance.
    pub tol: f64,
    pub max_iter: usize,
    /// Iterates within `cluster_radius · (1 + |root|)` are one root.
    pub cluster_radius: f64,
    /// Radius multiplier and phase offset of the initial circle.
    pub init_scale: f64,
    pub init_phase: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: 1e-12,
            max_iter: 200,
            cluster_radius: 1e-7,
            init_scale: 1.1,
            init_phase: 0.4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootEntry {
    pub value: ComplexPoint,
    pub multiplicity: usize,
}

/// Roots of a polynomial, merged into clusters with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<RootEntry>,
    /// `|p(root)|` for each entry of `roots`.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

impl RootSet {
    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Set-cardinality view: number of distinct roots.
    pub fn distinct_count(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = ComplexPoint> + '_ {
        self.roots.iter().map(|r| r.value)
    }

    /// Every root repeated according to its multiplicity.
    pub fn with_multiplicity(&self) -> Vec<ComplexPoint> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn filter(&self, mut keep: impl FnMut(&RootEntry) -> bool) -> RootSet {
        let (roots, residuals) = self
            .roots
            .iter()
            .zip(&self.residuals)
            .filter(|(r, _)| keep(r))
            .map(|(r, e)| (*r, *e))
            .unzip();
        RootSet {
            roots,
            residuals,
            iterations: self.iterations,
        }
    }
}

fn initial_guesses(p: &Polynomial, cfg: &RootConfig) -> Vec<ComplexPoint> {
    let n = p.degree();
    let ratio = (p.coeffs()[0] / p.leading()).norm();
    let mut radius = ratio.powf(1.0 / n as f64) * cfg.init_scale;
    // a vanishing constant term collapses the circle onto the origin
    if !(radius.is_finite() && radius > f64::MIN_POSITIVE) {
        radius = cfg.init_scale;
    }
    (0..n)
        .map(|k| {
            let theta = cfg.init_phase + std::f64::consts::TAU * k as f64 / n as f64;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Finds all `degree` roots of `p`, merging near-coincident iterates into one
/// entry with summed multiplicity.
pub fn aberth_roots(p: &Polynomial, cfg: &RootConfig) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 || p.is_zero() {
        return Err(Error::invalid("root finding needs degree >= 1"));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let dp = p.derivative();
    let mut z = initial_guesses(p, cfg);
    let mut done = vec![false; n];
    let mut iterations = 0;

    while iterations < cfg.max_iter && done.iter().any(|d| !d) {
        iterations += 1;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let value = p.eval(zk).0;
            if value.norm() <= cfg.tol * p.backward_scale(zk) {
                done[k] = true;
                continue;
            }
            let deriv = dp.eval(zk).0;
            let newton = value / deriv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k && z[j] != zk)
                .map(|j| (zk - z[j]).inv())
                .sum();
            let mut step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                step = if newton.re.is_finite() && newton.im.is_finite() {
                    newton
                } else {
                    // stationary point of p: kick off it
                    Complex64::new(cfg.tol.sqrt(), cfg.tol.sqrt()) * (1.0 + zk.norm())
                };
            }
            z[k] = zk - step;
            if step.norm() <= cfg.tol * (1.0 + z[k].norm()) {
                done[k] = true;
            }
        }
    }

    if done.iter().any(|d| !d) {
        let residuals: Vec<f64> = z.iter().map(|&r| p.eval(r).0.norm()).collect();
        let worst_residual = residuals.iter().copied().fold(0.0, f64::max);
        return Err(Error::SolverFailure {
            iterations,
            best: z,
            residuals,
            worst_residual,
        });
    }

    let set = cluster(p, &z, cfg, iterations);
    for (entry, residual) in set.roots.iter().zip(&set.residuals) {
        if *residual > cfg.tol * p.coefficient_scale(entry.value) {
            return Err(Error::SolverFailure {
                iterations,
                best: z.clone(),
                residuals: set.residuals.clone(),
                worst_residual: set.max_residual(),
            });
        }
    }
    Ok(set)
}

fn cluster(p: &Polynomial, z: &[ComplexPoint], cfg: &RootConfig, iterations: usize) -> RootSet {
    // (sum of members, member count)
    let mut groups: Vec<(ComplexPoint, usize)> = Vec::new();
    for &r in z {
        let hit = groups.iter_mut().find(|(sum, count)| {
            let center = *sum / *count as f64;
            (r - center).norm() <= cfg.cluster_radius * (1.0 + center.norm())
        });
        match hit {
            Some((sum, count)) => {
                *sum += r;
                *count += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    let roots: Vec<RootEntry> = groups
        .into_iter()
        .map(|(sum, count)| RootEntry {
            value: sum / count as f64,
            multiplicity: count,
        })
        .collect();
    let residuals = roots.iter().map(|r| p.eval(r.value).0.norm()).collect();
    RootSet {
        roots,
        residuals,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::poly_from_roots;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_re(set: &RootSet) -> Vec<RootEntry> {
        let mut v = set.roots.clone();
        v.sort_by(|a, b| a.value.re.total_cmp(&b.value.re));
        v
    }

    #[test]
    fn unit_square_roots() {
        let p = poly_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)], c(1.0, 0.0)).unwrap();
        let set = aberth_roots(&p, &RootConfig::default()).unwrap();
        let roots = sorted_by_re(&set);
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1].value - c(1.0, 0.0)).norm() < 1e-12);
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn triple_root_is_merged() {
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let set = aberth_roots(&p, &RootConfig::default()).unwrap();
        assert_eq!(set.distinct_count(), 1);
        assert_eq!(set.roots[0].multiplicity, 3);
        assert!(set.roots[0].value.norm() < 1e-9);
    }

    #[test]
    fn quadratic_formula_oracle() {
        // z^2 - z/4
        let (a, b, cc) = (c(1.0, 0.0), c(-0.25, 0.0), c(0.0, 0.0));
        let disc = (b * b - 4.0 * a * cc).sqrt();
        let oracle = [(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)];
        let p = Polynomial::new(vec![cc, b, a]).unwrap();
        let set = aberth_roots(&p, &RootConfig::default()).unwrap();
        let roots = sorted_by_re(&set);
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value - oracle[0]).norm() < 1e-12);
        assert!((roots[1].value - oracle[1]).norm() < 1e-12);
        assert!((oracle[1] - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn degree_zero_rejected() {
        let p = Polynomial::constant(c(2.0, 0.0));
        assert!(matches!(
            aberth_roots(&p, &RootConfig::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_best_iterate() {
        let p = poly_from_roots(&[c(0.3, 0.1), c(-0.7, 0.2), c(0.1, -0.9)], c(1.0, 0.0)).unwrap();
        let cfg = RootConfig {
            max_iter: 1,
            ..RootConfig::default()
        };
        match aberth_roots(&p, &cfg) {
            Err(Error::SolverFailure { best, residuals, .. }) => {
                assert_eq!(best.len(), 3);
                assert_eq!(residuals.len(), 3);
            }
            other => panic!("expected solver failure, got {other:?}"),
        }
    }
}
