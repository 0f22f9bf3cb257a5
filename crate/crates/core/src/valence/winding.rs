use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::DiscMapHandle;
use crate::numerics::ComplexPoint;

/// Knobs for phase tracking along a circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingOptions {
    pub initial_nodes: usize,
    /// A node with `|f − w| ≤ proximity · (|w| + |f|)` aborts the contour.
    pub proximity: f64,
    pub max_nodes: usize,
    /// Steps whose phase jump exceeds this are bisected.
    pub max_phase_step: f64,
    /// Steps whose chord `|g_b − g_a|` exceeds this fraction of
    /// `min(|g_a|, |g_b|)` are bisected.
    pub chord_ratio: f64,
    /// Also bisect when the first-order change `|f′|·r·Δθ` predicted from
    /// either endpoint exceeds `chord_ratio · min(|g_a|, |g_b|)`. This catches
    /// loops that fit entirely between two nodes.
    pub derivative_guard: bool,
    /// Accepted counts must lie this close to an integer.
    pub residual_tol: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions {
            initial_nodes: 128,
            proximity: 1e-9,
            max_nodes: 1 << 20,
            max_phase_step: FRAC_PI_2,
            chord_ratio: 0.5,
            derivative_guard: true,
            residual_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Winding {
    pub count: i64,
    /// Distance of the raw winding to `count`.
    pub residual: f64,
    pub nodes: usize,
}

#[derive(Clone, Copy)]
struct Node {
    theta: f64,
    g: ComplexPoint,
    speed: f64,
}

struct Contour<'a> {
    f: &'a DiscMapHandle,
    w: ComplexPoint,
    r: f64,
    opts: &'a WindingOptions,
    nodes: usize,
}

impl Contour<'_> {
    /// `(f − w, |d/dθ f(r e^{iθ})|)` at one node.
    fn sample(&mut self, theta: f64) -> Result<Node> {
        self.nodes += 1;
        if self.nodes > self.opts.max_nodes {
            return Err(Error::RefinementOverflow {
                radius: self.r,
                limit: self.opts.max_nodes,
            });
        }
        let z = Complex64::from_polar(self.r, theta);
        let (value, speed) = if self.opts.derivative_guard {
            let (v, d) = self.f.eval(z)?;
            (v, d.norm() * self.r)
        } else {
            (self.f.value(z)?, 0.0)
        };
        let g = value - self.w;
        let distance = g.norm();
        if distance <= self.opts.proximity * (self.w.norm() + value.norm()) {
            return Err(Error::ContourProximity {
                radius: self.r,
                distance,
            });
        }
        Ok(Node { theta, g, speed })
    }

    fn needs_split(&self, a: &Node, b: &Node) -> bool {
        let scale = self.opts.chord_ratio * a.g.norm().min(b.g.norm());
        (b.g / a.g).arg().abs() > self.opts.max_phase_step
            || (b.g - a.g).norm() > scale
            || a.speed.max(b.speed) * (b.theta - a.theta) > scale
    }
}

/// Winding number of `θ ↦ f(r e^{iθ}) − w` around 0, i.e. the number of
/// solutions of `f(z) = w` in `|z| < r` counted with multiplicity.
pub fn winding_number(f: &DiscMapHandle, w: ComplexPoint, r: f64, opts: &WindingOptions) -> Result<Winding> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::invalid(format!("radius {r} must lie in (0, 1)")));
    }
    if opts.initial_nodes < 16 {
        return Err(Error::invalid("at least 16 initial nodes are required"));
    }
    let mut contour = Contour {
        f,
        w,
        r,
        opts,
        nodes: 0,
    };
    let n = opts.initial_nodes;
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..n {
        let theta = TAU * k as f64 / n as f64;
        samples.push(contour.sample(theta)?);
    }
    samples.push(Node {
        theta: TAU,
        ..samples[0]
    });

    let mut total = 0.0;
    let mut stack = Vec::new();
    for pair in samples.windows(2) {
        stack.push((pair[0], pair[1]));
        while let Some((a, b)) = stack.pop() {
            if contour.needs_split(&a, &b) {
                let m = contour.sample(0.5 * (a.theta + b.theta))?;
                stack.push((m, b));
                stack.push((a, m));
            } else {
                total += (b.g / a.g).arg();
            }
        }
    }

    let turns = total / TAU;
    let count = turns.round();
    let residual = (turns - count).abs();
    if residual >= opts.residual_tol {
        return Err(Error::NonIntegralWinding { radius: r, residual });
    }
    Ok(Winding {
        count: count as i64,
        residual,
        nodes: contour.nodes,
    })
}
