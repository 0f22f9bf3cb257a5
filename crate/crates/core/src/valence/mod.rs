//! Argument-principle valence: winding numbers on circles, valence at a
//! point over a radius schedule, raw profiles and heatmaps.

mod heatmap;
mod winding;

pub use heatmap::{valence_heatmap, valence_heatmap_in, with_workers, Cell, HeatmapGrid, HeatmapSummary, Window};
pub use winding::{winding_number, Winding, WindingOptions};

use crate::error::{Error, Result};
use crate::map::DiscMapHandle;
use crate::numerics::ComplexPoint;

/// Policy for valence queries over a radius schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValenceOptions {
    pub winding: WindingOptions,
    /// Radius perturbations tried after a contour-proximity failure.
    pub jitter_attempts: usize,
    /// Perturbation unit, as a fraction of `1 − r`.
    pub jitter_scale: f64,
    /// Number of trailing equal counts that make a report stabilized.
    pub stable_window: usize,
    /// Stop the schedule as soon as the window is stable.
    pub early_stop: bool,
}

impl Default for ValenceOptions {
    fn default() -> Self {
        ValenceOptions {
            winding: WindingOptions::default(),
            jitter_attempts: 5,
            jitter_scale: 1e-4,
            stable_window: 3,
            early_stop: false,
        }
    }
}

/// `r_j = 1 − 2^{−j}` for `j = 1..=20`.
pub fn default_schedule() -> Vec<f64> {
    (1..=20).map(|j| 1.0 - 0.5f64.powi(j)).collect()
}

/// Winding valence of a map at one target over a radius schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct ValenceReport {
    pub w: ComplexPoint,
    /// Radii actually used, after any perturbation.
    pub radii: Vec<f64>,
    pub counts: Vec<i64>,
    pub residuals: Vec<f64>,
    pub stabilized: bool,
    pub value: i64,
    /// Radius at which every perturbation hit the contour-proximity guard.
    pub failed_radius: Option<f64>,
}

fn check_schedule(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::invalid("radius schedule is empty"));
    }
    if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::invalid("radii must lie in (0, 1)"));
    }
    if radii.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::invalid("radii must be strictly increasing"));
    }
    Ok(())
}

/// Winding at `r`, retrying at `r ± k·δ` with `δ = jitter_scale·(1 − r)` when
/// the contour passes too close to `w`. Returns the radius actually used, or
/// `None` if every attempt failed on proximity.
pub fn winding_with_jitter(
    f: &DiscMapHandle,
    w: ComplexPoint,
    r: f64,
    opts: &ValenceOptions,
) -> Result<Option<(f64, Winding)>> {
    let delta = opts.jitter_scale * (1.0 - r);
    let mut candidates = vec![r];
    for k in 1..=opts.jitter_attempts {
        let step = delta * k.div_ceil(2) as f64;
        candidates.push(if k % 2 == 1 { r + step } else { r - step });
    }
    for radius in candidates {
        if !(radius > 0.0 && radius < 1.0) {
            continue;
        }
        match winding_number(f, w, radius, &opts.winding) {
            Ok(wnd) => return Ok(Some((radius, wnd))),
            Err(Error::ContourProximity { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Valence of `f` at `w`. The value is a lower bound for the number of
/// solutions of `f(z) = w` in the disc, and exact for finite Blaschke
/// products once stabilized.
pub fn valence_at(
    f: &DiscMapHandle,
    w: ComplexPoint,
    schedule: &[f64],
    opts: &ValenceOptions,
) -> Result<ValenceReport> {
    check_schedule(schedule)?;
    let mut report = ValenceReport {
        w,
        radii: Vec::new(),
        counts: Vec::new(),
        residuals: Vec::new(),
        stabilized: false,
        value: 0,
        failed_radius: None,
    };
    for &r in schedule {
        let Some((used, wnd)) = winding_with_jitter(f, w, r, opts)? else {
            report.failed_radius = Some(r);
            break;
        };
        if let Some(&previous) = report.counts.last() {
            if wnd.count < previous {
                return Err(Error::NonMonotoneCounts {
                    radius: used,
                    previous,
                    current: wnd.count,
                });
            }
        }
        report.radii.push(used);
        report.counts.push(wnd.count);
        report.residuals.push(wnd.residual);
        if opts.early_stop && tail_is_stable(&report.counts, opts.stable_window) {
            break;
        }
    }
    report.value = report.counts.last().copied().unwrap_or(0);
    report.stabilized = report.failed_radius.is_none() && tail_is_stable(&report.counts, opts.stable_window);
    Ok(report)
}

fn tail_is_stable(counts: &[i64], window: usize) -> bool {
    counts.len() >= window && counts[counts.len() - window..].windows(2).all(|p| p[0] == p[1])
}

/// Raw per-radius winding counts with no early stopping and no jitter.
pub fn valence_profile(
    f: &DiscMapHandle,
    w: ComplexPoint,
    radii: &[f64],
    opts: &WindingOptions,
) -> Result<Vec<(f64, i64)>> {
    check_schedule(radii)?;
    let mut profile: Vec<(f64, i64)> = Vec::with_capacity(radii.len());
    for &r in radii {
        let count = winding_number(f, w, r, opts)?.count;
        if let Some(&(_, previous)) = profile.last() {
            if count < previous {
                return Err(Error::NonMonotoneCounts {
                    radius: r,
                    previous,
                    current: count,
                });
            }
        }
        profile.push((r, count));
    }
    Ok(profile)
}
