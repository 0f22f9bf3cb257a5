//! Campaign for `f = g^k`, where `g` maps the disc onto the slit disc: `f` is
//! neither injective nor onto, yet misses only the point 0.

use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::json;

use super::{case_rng, sample_disc, CaseRecord, SuiteReport, TARGET_RADIUS};
use crate::gallery::{make_slit_power, slit_g, slit_h, slit_power_preimage};
use crate::map::DiscMapHandle;
use crate::mapspec::complex_json;
use crate::numerics::unit;
use crate::valence::{default_schedule, valence_at, winding_number, ValenceOptions, WindingOptions};

const ROUND_TRIP_SAMPLES: usize = 1000;
const ROUND_TRIP_RADIUS: f64 = 0.99;
const ROUND_TRIP_TOL: f64 = 1e-9;
const WITNESS_TRIES: usize = 100;
const WITNESS_SEPARATION: f64 = 0.1;
const WITNESS_TOL: f64 = 1e-9;
const OMITTED_VALUE_RADIUS: f64 = 1.0 - 1e-6;
const MEMBERSHIP_SAMPLES: usize = 10_000;
const MEMBERSHIP_TOL: f64 = 1e-9;
const GRID_RADII: usize = 25;
const GRID_ANGLES: usize = 20;
const GRID_RADIUS: f64 = 0.95;
const DERIVATIVE_FLOOR: f64 = 1e-6;
const VALENCE_SAMPLES: usize = 100;

fn round_trip_case(seed: u64) -> CaseRecord {
    let mut rng = case_rng(seed, 0);
    let mut case = CaseRecord::new(0, "round-trip");
    let mut worst = 0.0f64;
    for _ in 0..ROUND_TRIP_SAMPLES {
        let u = sample_disc(&mut rng, ROUND_TRIP_RADIUS);
        match slit_g(u).and_then(|(z, _)| slit_h(z)) {
            Ok(back) => worst = worst.max((back - u).norm()),
            Err(e) => {
                case.set("u", complex_json(u));
                case.fail_with("round trip", &e);
                return case;
            }
        }
    }
    case.set("samples", ROUND_TRIP_SAMPLES).set("max_error", worst);
    case.require("h(g(u)) = u", worst < ROUND_TRIP_TOL);
    case
}

/// `u₂ = h(ω g(u₁))` with `ω = e^{2πi/k}` has `g(u₂)^k = g(u₁)^k`.
fn witness_case(seed: u64, k: u32, f: &DiscMapHandle) -> CaseRecord {
    let mut rng = case_rng(seed, 1);
    let mut case = CaseRecord::new(1, "non-injective");
    let omega = unit(TAU / k as f64);
    for _ in 0..WITNESS_TRIES {
        let u1 = sample_disc(&mut rng, TARGET_RADIUS);
        let Ok(u2) = slit_g(u1).and_then(|(z, _)| slit_h(omega * z)) else {
            continue;
        };
        let (Ok(f1), Ok(f2)) = (f.value(u1), f.value(u2)) else {
            continue;
        };
        let separation = (u1 - u2).norm();
        let distance = (f1 - f2).norm();
        if separation > WITNESS_SEPARATION && distance < WITNESS_TOL {
            case.set("u1", complex_json(u1))
                .set("u2", complex_json(u2))
                .set("separation", separation)
                .set("image_distance", distance);
            return case;
        }
    }
    case.require("witness pair found", false);
    case
}

fn omitted_value_case(f: &DiscMapHandle) -> CaseRecord {
    let mut case = CaseRecord::new(2, "omits-zero");
    let mut radii = default_schedule();
    radii.push(OMITTED_VALUE_RADIUS);
    radii.sort_by(f64::total_cmp);
    case.set("radii", json!(radii));
    let mut counts = Vec::with_capacity(radii.len());
    for &r in &radii {
        match winding_number(f, Complex64::new(0.0, 0.0), r, &WindingOptions::default()) {
            Ok(wnd) => counts.push(wnd.count),
            Err(e) => {
                case.set("radius", r);
                case.fail_with("winding at 0", &e);
                return case;
            }
        }
    }
    case.require("winding 0 at every radius", counts.iter().all(|&c| c == 0));
    case.set("counts", json!(counts));
    case
}

fn membership_case(seed: u64, k: u32, f: &DiscMapHandle) -> CaseRecord {
    let mut rng = case_rng(seed, 3);
    let mut case = CaseRecord::new(3, "almost-onto");
    let mut members = 0usize;
    let mut worst = 0.0f64;
    let mut first_miss = None;
    while members + first_miss.iter().count() < MEMBERSHIP_SAMPLES {
        let w = sample_disc(&mut rng, 1.0);
        if w.norm() == 0.0 || w.norm() >= 1.0 {
            continue;
        }
        match slit_power_preimage(w, k).map(|u| f.value(u)) {
            Some(Ok(v)) => {
                members += 1;
                worst = worst.max((v - w).norm());
            }
            _ => {
                first_miss = Some(w);
                break;
            }
        }
    }
    case.set("samples", MEMBERSHIP_SAMPLES)
        .set("members", members)
        .set("max_residual", worst);
    if let Some(w) = first_miss {
        case.set("missed", complex_json(w));
    }
    case.require("every sample attained", members == MEMBERSHIP_SAMPLES);
    case.require("preimage residual", worst < MEMBERSHIP_TOL);
    case
}

/// `f′ = k g^{k−1} g′`, so `f′ ≠ 0` follows from `g ≠ 0` and `g′ ≠ 0`; both
/// factors are checked against the floor since `|f′|` itself decays like
/// `|u + i|^{2k−1}` near the preimage of the slit tip.
fn derivative_case(k: u32, f: &DiscMapHandle) -> CaseRecord {
    let mut case = CaseRecord::new(4, "derivative-floor");
    let mut best = (Complex64::new(0.0, 0.0), f64::INFINITY);
    let mut min_g = f64::INFINITY;
    let mut min_dg = f64::INFINITY;
    for i in 0..GRID_RADII {
        let r = GRID_RADIUS * (i as f64 + 0.5) / GRID_RADII as f64;
        for j in 0..GRID_ANGLES {
            let z = unit(TAU * j as f64 / GRID_ANGLES as f64) * r;
            match (f.eval(z), slit_g(z)) {
                (Ok((_, d)), Ok((g, dg))) => {
                    if d.norm() < best.1 {
                        best = (z, d.norm());
                    }
                    min_g = min_g.min(g.norm());
                    min_dg = min_dg.min(dg.norm());
                }
                (Err(e), _) | (_, Err(e)) => {
                    case.fail_with("evaluation", &e);
                    return case;
                }
            }
        }
    }
    case.set("grid_points", GRID_RADII * GRID_ANGLES)
        .set("argmin", complex_json(best.0))
        .set("min_derivative", best.1)
        .set("min_base", min_g)
        .set("min_base_derivative", min_dg);
    case.require("f' nonzero", best.1 > 0.0);
    case.require("g bounded away from 0", min_g > DERIVATIVE_FLOOR);
    case.require("g' bounded away from 0", min_dg > DERIVATIVE_FLOOR);
    if k == 2 {
        case.require("f' bounded away from 0", best.1 > DERIVATIVE_FLOOR);
    }
    case
}

fn valence_case(seed: u64, k: u32, f: &DiscMapHandle) -> CaseRecord {
    let mut rng = case_rng(seed, 5);
    let mut case = CaseRecord::new(5, "valence-bound");
    let schedule = default_schedule();
    let opts = ValenceOptions::default();
    let mut max_value = 0;
    for _ in 0..VALENCE_SAMPLES {
        let w = sample_disc(&mut rng, TARGET_RADIUS);
        match valence_at(f, w, &schedule, &opts) {
            Ok(rep) => {
                max_value = max_value.max(rep.value);
                if rep.value > k as i64 {
                    case.set("w", complex_json(w)).set("counts", json!(rep.counts));
                    break;
                }
            }
            Err(e) => {
                case.set("w", complex_json(w));
                case.fail_with("valence", &e);
                return case;
            }
        }
    }
    case.set("samples", VALENCE_SAMPLES).set("max_valence", max_value);
    case.require("valence at most k", max_value <= k as i64);
    case
}

/// Six clauses for `g^k`: the round trip of `g` and its inverse, a
/// non-injectivity witness, winding 0 about the omitted value 0 at every
/// radius, exact membership of random nonzero targets, a derivative floor,
/// and valence at most `k`.
pub fn check_theorem_3_2(seed: u64, k: u32) -> crate::Result<SuiteReport> {
    let start = Instant::now();
    let f = make_slit_power(k)?;
    let cases = super::run_cases(6, |i| {
        let mut case = match i {
            0 => round_trip_case(seed),
            1 => witness_case(seed, k, &f),
            2 => omitted_value_case(&f),
            3 => membership_case(seed, k, &f),
            4 => derivative_case(k, &f),
            _ => valence_case(seed, k, &f),
        };
        case.set("k", k);
        case
    });
    Ok(SuiteReport {
        suite: "theorem-3-2".into(),
        seed: Some(seed),
        cases,
        wall_time: start.elapsed(),
    })
}
