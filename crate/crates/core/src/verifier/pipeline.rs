//! Four-stage certificate that a bounded-valence, critical-point-free map with
//! unimodular boundary values is a disc automorphism: boundary modulus,
//! valence, derivative floor, then explicit recovery.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{CaseRecord, SuiteReport};
use crate::discmaps::{mobius_recover, MobiusAutomorphism, RecoverConfig};
use crate::gallery::{make_atomic_inner, make_slit_power};
use crate::map::DiscMapHandle;
use crate::mapspec::complex_json;
use crate::mapspec::{GallerySpec, MapSpec};
use crate::numerics::{unit, ComplexPoint};
use crate::valence::{default_schedule, valence_profile, winding_with_jitter, ValenceOptions, WindingOptions};

/// Valence bound claimed for the canonical candidates.
pub const CANONICAL_VALENCE_BOUND: i64 = 2;

const BOUNDARY_RADIUS: f64 = 1.0 - 1e-6;
const BOUNDARY_SAMPLES: usize = 512;
/// Mean boundary modulus above which a map is diagnostic-consistent with inner.
const INNER_THRESHOLD: f64 = 0.99;
const VALENCE_SAMPLES: usize = 100;
const VALENCE_SAMPLE_RADIUS: f64 = 0.9;
const GRID_RADIUS: f64 = 0.999;
const GRID_SIDE: usize = 100;
const DERIVATIVE_FLOOR: f64 = 1e-6;
const WITNESS_RADII: [f64; 3] = [0.9, 0.99, 0.999];
/// Sup-error the canonical automorphism must reach.
const CANONICAL_RECOVERY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Every stage passed and the map was recovered explicitly.
    Automorphism {
        mobius: MobiusAutomorphism,
        sup_error: f64,
        boundary_mean: f64,
        min_derivative: f64,
    },
    NotInner {
        boundary_mean: f64,
    },
    /// Some target exceeded the bound or never stabilized. `witness` is the
    /// raw profile at radii 0.9, 0.99, 0.999.
    ValenceUnbounded {
        w: ComplexPoint,
        radius: f64,
        count: i64,
        witness: Vec<(f64, i64)>,
    },
    CriticalPoint {
        z: ComplexPoint,
        min_derivative: f64,
    },
    RecoveryFailed {
        reason: String,
    },
    /// A numerical error stopped a stage before it could decide.
    Inconclusive {
        stage: &'static str,
        reason: String,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Automorphism { .. } => "automorphism",
            Verdict::NotInner { .. } => "not-inner",
            Verdict::ValenceUnbounded { .. } => "valence-unbounded",
            Verdict::CriticalPoint { .. } => "critical-point",
            Verdict::RecoveryFailed { .. } => "recovery-failed",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn to_json(&self) -> Value {
        let detail = match self {
            Verdict::Automorphism {
                mobius,
                sup_error,
                boundary_mean,
                min_derivative,
            } => json!({
                "alpha": complex_json(mobius.alpha()),
                "lambda": complex_json(mobius.lambda()),
                "sup_error": sup_error,
                "boundary_mean": boundary_mean,
                "min_derivative": min_derivative,
            }),
            Verdict::NotInner { boundary_mean } => json!({ "boundary_mean": boundary_mean }),
            Verdict::ValenceUnbounded {
                w,
                radius,
                count,
                witness,
            } => json!({
                "w": complex_json(*w),
                "radius": radius,
                "count": count,
                "witness_radii": witness.iter().map(|p| p.0).collect::<Vec<_>>(),
                "witness_counts": witness.iter().map(|p| p.1).collect::<Vec<_>>(),
            }),
            Verdict::CriticalPoint { z, min_derivative } => json!({
                "z": complex_json(*z),
                "min_derivative": min_derivative,
            }),
            Verdict::RecoveryFailed { reason } => json!({ "reason": reason }),
            Verdict::Inconclusive { stage, reason } => json!({ "stage": stage, "reason": reason }),
        };
        json!({ "verdict": self.name(), "detail": detail })
    }
}

/// Mean of `|f|` over equispaced points of the circle `r = 1 − 10⁻⁶`.
fn boundary_mean(f: &DiscMapHandle) -> crate::Result<f64> {
    let mut sum = 0.0;
    for k in 0..BOUNDARY_SAMPLES {
        let z = unit(TAU * k as f64 / BOUNDARY_SAMPLES as f64) * BOUNDARY_RADIUS;
        sum += f.value(z)?.norm();
    }
    Ok(sum / BOUNDARY_SAMPLES as f64)
}

/// `f(0)` followed by a golden-angle spiral filling the disc of radius 0.9.
fn valence_targets(f: &DiscMapHandle) -> crate::Result<Vec<ComplexPoint>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut targets = vec![f.value(Complex64::new(0.0, 0.0))?];
    let n = VALENCE_SAMPLES - 1;
    for k in 0..n {
        let r = VALENCE_SAMPLE_RADIUS * ((k as f64 + 0.5) / n as f64).sqrt();
        targets.push(Complex64::from_polar(r, golden * k as f64));
    }
    Ok(targets)
}

enum ValenceStage {
    Bounded,
    Unbounded { w: ComplexPoint, radius: f64, count: i64 },
    Failed(String),
}

fn valence_stage(f: &DiscMapHandle, bound: i64, opts: &ValenceOptions) -> crate::Result<ValenceStage> {
    let schedule = default_schedule();
    for w in valence_targets(f)? {
        let mut counts = Vec::with_capacity(schedule.len());
        for &r in &schedule {
            let wnd = match winding_with_jitter(f, w, r, opts) {
                Ok(Some((_, wnd))) => wnd,
                Ok(None) => {
                    return Ok(ValenceStage::Failed(format!(
                        "every perturbation of r = {r} met w = {w}"
                    )))
                }
                Err(e) => return Ok(ValenceStage::Failed(e.to_string())),
            };
            if wnd.count > bound {
                return Ok(ValenceStage::Unbounded {
                    w,
                    radius: r,
                    count: wnd.count,
                });
            }
            counts.push(wnd.count);
        }
        let tail = &counts[counts.len() - opts.stable_window.min(counts.len())..];
        if tail.windows(2).any(|p| p[0] != p[1]) {
            return Ok(ValenceStage::Unbounded {
                w,
                radius: *schedule.last().unwrap_or(&0.0),
                count: *counts.last().unwrap_or(&0),
            });
        }
    }
    Ok(ValenceStage::Bounded)
}

/// `(argmin, min)` of `|f′|` over a polar grid of radius 0.999.
fn derivative_floor(f: &DiscMapHandle) -> crate::Result<(ComplexPoint, f64)> {
    let mut best = (Complex64::new(0.0, 0.0), f64::INFINITY);
    for i in 0..GRID_SIDE {
        let r = GRID_RADIUS * (i + 1) as f64 / GRID_SIDE as f64;
        for j in 0..GRID_SIDE {
            let z = unit(TAU * j as f64 / GRID_SIDE as f64) * r;
            let d = f.eval(z)?.1.norm();
            if d < best.1 {
                best = (z, d);
            }
        }
    }
    Ok(best)
}

/// Runs the pipeline on `candidate` with the claimed valence bound. Every
/// outcome, including numerical trouble, is a verdict.
pub fn check_theorem_3_1(candidate: &DiscMapHandle, valence_bound: i64) -> Verdict {
    let mean = match boundary_mean(candidate) {
        Ok(m) => m,
        Err(e) => {
            return Verdict::Inconclusive {
                stage: "boundary",
                reason: e.to_string(),
            }
        }
    };
    if !(mean > INNER_THRESHOLD) {
        return Verdict::NotInner { boundary_mean: mean };
    }

    match valence_stage(candidate, valence_bound, &ValenceOptions::default()) {
        Ok(ValenceStage::Bounded) => {}
        Ok(ValenceStage::Unbounded { w, radius, count }) => {
            let witness = valence_profile(candidate, w, &WITNESS_RADII, &WindingOptions::default()).unwrap_or_default();
            return Verdict::ValenceUnbounded {
                w,
                radius,
                count,
                witness,
            };
        }
        Ok(ValenceStage::Failed(reason)) => {
            return Verdict::Inconclusive {
                stage: "valence",
                reason,
            }
        }
        Err(e) => {
            return Verdict::Inconclusive {
                stage: "valence",
                reason: e.to_string(),
            }
        }
    }

    let (z, min_derivative) = match derivative_floor(candidate) {
        Ok(v) => v,
        Err(e) => {
            return Verdict::Inconclusive {
                stage: "derivative",
                reason: e.to_string(),
            }
        }
    };
    if !(min_derivative > DERIVATIVE_FLOOR) {
        return Verdict::CriticalPoint { z, min_derivative };
    }

    match mobius_recover(candidate, &RecoverConfig::default()) {
        Ok(rec) => Verdict::Automorphism {
            mobius: rec.mobius,
            sup_error: rec.sup_error,
            boundary_mean: mean,
            min_derivative,
        },
        Err(e) => Verdict::RecoveryFailed { reason: e.to_string() },
    }
}

/// One of the canonical pipeline inputs.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: &'static str,
    pub map: DiscMapHandle,
    pub expected: &'static str,
    /// Spec of the underlying map, recorded even when `map` is opaque.
    pub spec: MapSpec,
}

/// The canonical triple: an opaque automorphism, `g²` and the atomic inner
/// function.
pub fn canonical_candidates() -> Vec<Candidate> {
    let mobius = MobiusAutomorphism::new(Complex64::new(0.3, 0.0), unit(PI / 3.0)).expect("admissible parameters");
    vec![
        Candidate {
            name: "mobius",
            map: DiscMapHandle::new(mobius).opaque("opaque automorphism"),
            expected: "automorphism",
            spec: mobius.to_spec(),
        },
        Candidate {
            name: "slit-power",
            map: make_slit_power(2).expect("k = 2 is admissible"),
            expected: "not-inner",
            spec: MapSpec::Gallery(GallerySpec::SlitPower { k: 2 }),
        },
        Candidate {
            name: "atomic-inner",
            map: make_atomic_inner(),
            expected: "valence-unbounded",
            spec: MapSpec::Gallery(GallerySpec::AtomicInner),
        },
    ]
}

/// The canonical triple as a suite: each verdict must match its expectation,
/// the automorphism must be recovered to 1e−9, and the atomic inner function's
/// witness profile must read 1, 5, 15.
pub fn check_pipeline_suite() -> SuiteReport {
    let start = Instant::now();
    let candidates = canonical_candidates();
    let cases = super::run_cases(candidates.len(), |i| {
        let Candidate {
            name,
            map,
            expected,
            spec,
        } = &candidates[i];
        let mut case = CaseRecord::new(i, *name);
        let verdict = check_theorem_3_1(map, CANONICAL_VALENCE_BOUND);
        case.set("map", spec.to_json())
            .set("opaque", map.spec().is_none())
            .set("valence_bound", CANONICAL_VALENCE_BOUND)
            .set("expected", *expected);
        for (k, v) in verdict.to_json().as_object().into_iter().flatten() {
            case.set(k, v.clone());
        }
        case.require("verdict", verdict.name() == *expected);
        match &verdict {
            Verdict::Automorphism { sup_error, .. } => {
                case.require("recovery sup-error", *sup_error < CANONICAL_RECOVERY_TOL);
            }
            Verdict::ValenceUnbounded { witness, .. } if *name == "atomic-inner" => {
                let counts: Vec<i64> = witness.iter().map(|p| p.1).collect();
                case.require("witness profile", counts == [1, 5, 15]);
            }
            _ => {}
        }
        case
    });
    SuiteReport {
        suite: "theorem-3-1".into(),
        seed: None,
        cases,
        wall_time: start.elapsed(),
    }
}
