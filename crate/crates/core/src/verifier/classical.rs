//! Valence, composition and critical-point campaigns over random finite
//! Blaschke products.

use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{
    case_rng, points_json, run_cases, sample_blaschke, sample_disc, spec_json, CaseRecord, SuiteReport, TARGET_RADIUS,
    ZERO_RADIUS,
};
use crate::discmaps::{
    blaschke_compose, blaschke_critical_points, blaschke_preimages, mobius_recover, BlaschkeProduct,
    MobiusAutomorphism, RecoverConfig, UNIMODULAR_TOL,
};
use crate::gallery::{make_half_map, make_scaled_exponential, DEFAULT_EPSILON, DEFAULT_RATE};
use crate::map::DiscMapHandle;
use crate::mapspec::complex_json;
use crate::numerics::{ComplexPoint, RootConfig};
use crate::valence::{default_schedule, valence_at, valence_heatmap, valence_heatmap_in, ValenceOptions, Window};

/// Accepted winding residual.
const RESIDUAL_TOL: f64 = 1e-6;
/// Pointwise agreement required of a composed product.
const COMPOSE_TOL: f64 = 1e-8;
const COMPOSE_PROBES: usize = 50;
/// Sup-error required of a recovered automorphism.
const RECOVERY_TOL: f64 = 1e-8;

const PROBE_RESOLUTION: usize = 32;
const PROBE_RADIUS: f64 = 0.99;
/// The scaled exponential's image at radius 0.99 has modulus below 2·10⁻⁶.
const SCALED_EXP_WINDOW: f64 = 1e-6;

fn forward_case(seed: u64, index: usize, n_targets: usize, schedule: &[f64], opts: &ValenceOptions) -> CaseRecord {
    let mut rng = case_rng(seed, index);
    let mut case = CaseRecord::new(index, "product");
    let b = match sample_blaschke(&mut rng, 1..=6) {
        Ok(b) => b,
        Err(e) => {
            case.fail_with("construction", &e);
            return case;
        }
    };
    let degree = b.degree() as i64;
    case.set("map", b.to_spec().to_json())
        .set("expected", degree)
        .set("targets", n_targets);
    let handle = DiscMapHandle::new(b.clone());
    let cfg = RootConfig::default();
    let mut mismatches = Vec::new();
    let mut worst_residual = 0.0f64;
    for _ in 0..n_targets {
        let w = sample_disc(&mut rng, TARGET_RADIUS);
        let report = valence_at(&handle, w, schedule, opts);
        let preimages = blaschke_preimages(&b, w, &cfg);
        let mut entry = serde_json::Map::new();
        let mut ok = true;
        match &report {
            Ok(r) => {
                let residual = r.residuals.iter().copied().fold(0.0, f64::max);
                worst_residual = worst_residual.max(residual);
                ok &= r.value == degree && r.stabilized && residual < RESIDUAL_TOL;
                entry.insert("valence".into(), json!(r.value));
                entry.insert("stabilized".into(), json!(r.stabilized));
                entry.insert("radii".into(), json!(r.radii));
                entry.insert("counts".into(), json!(r.counts));
            }
            Err(e) => {
                ok = false;
                entry.insert("valence_error".into(), json!(e.to_string()));
            }
        }
        match &preimages {
            Ok(p) => {
                ok &= p.multiplicity_sum() as i64 == degree;
                entry.insert("preimage_count".into(), json!(p.multiplicity_sum()));
            }
            Err(e) => {
                ok = false;
                entry.insert("preimage_error".into(), json!(e.to_string()));
            }
        }
        if !ok {
            entry.insert("w".into(), complex_json(w));
            mismatches.push(Value::Object(entry));
        }
    }
    case.set("worst_residual", worst_residual);
    case.require("valence equals degree", mismatches.is_empty());
    if !mismatches.is_empty() {
        case.set("mismatches", mismatches);
    }
    case
}

fn heatmap_probe(index: usize, label: &str, f: &DiscMapHandle, window: Window, opts: &ValenceOptions) -> CaseRecord {
    let mut case = CaseRecord::new(index, label);
    case.set("map", spec_json(f.spec()))
        .set("resolution", PROBE_RESOLUTION)
        .set("radius", PROBE_RADIUS)
        .set("window_center", complex_json(window.center))
        .set("window_half_width", window.half_width);
    let grid = if window == Window::unit() {
        valence_heatmap(f, PROBE_RESOLUTION, PROBE_RADIUS, opts)
    } else {
        valence_heatmap_in(f, PROBE_RESOLUTION, PROBE_RADIUS, window, opts)
    };
    match grid {
        Ok(grid) => {
            let counts: Vec<i64> = grid.distinct_counts().into_iter().collect();
            case.set("distinct_counts", json!(counts));
            case.require("at least two distinct counts", counts.len() >= 2);
        }
        Err(e) => case.fail_with("heatmap", &e),
    }
    case
}

/// Random products of degree 1..=6 must have valence equal to their degree at
/// every sampled target, by winding count and by preimage count. The maps
/// `z/2` and the scaled exponential must show non-constant valence.
pub fn check_theorem_a(seed: u64, n_products: usize, n_targets: usize) -> SuiteReport {
    let start = Instant::now();
    let schedule = default_schedule();
    let opts = ValenceOptions::default();
    let mut cases = run_cases(n_products, |i| forward_case(seed, i, n_targets, &schedule, &opts));
    cases.push(heatmap_probe(
        n_products,
        "heatmap-half",
        &make_half_map(),
        Window::unit(),
        &opts,
    ));
    let scaled = make_scaled_exponential(DEFAULT_EPSILON, DEFAULT_RATE).expect("default parameters are admissible");
    let window = Window {
        center: Complex64::new(0.0, 0.0),
        half_width: SCALED_EXP_WINDOW,
    };
    cases.push(heatmap_probe(
        n_products + 1,
        "heatmap-scaled-exp",
        &scaled,
        window,
        &opts,
    ));
    SuiteReport {
        suite: "theorem-a".into(),
        seed: Some(seed),
        cases,
        wall_time: start.elapsed(),
    }
}

fn is_valid_product(b: &BlaschkeProduct) -> bool {
    (b.lambda().norm() - 1.0).abs() <= UNIMODULAR_TOL && b.zeros().iter().all(|a| a.norm() < 1.0)
}

fn compose_case(seed: u64, index: usize) -> CaseRecord {
    let mut rng = case_rng(seed, index);
    let mut case = CaseRecord::new(index, "pair");
    let (outer, inner) = match (sample_blaschke(&mut rng, 1..=3), sample_blaschke(&mut rng, 1..=3)) {
        (Ok(o), Ok(i)) => (o, i),
        (Err(e), _) | (_, Err(e)) => {
            case.fail_with("construction", &e);
            return case;
        }
    };
    case.set("outer", outer.to_spec().to_json())
        .set("inner", inner.to_spec().to_json());
    let composed = match blaschke_compose(&outer, &inner, &RootConfig::default()) {
        Ok(c) => c,
        Err(e) => {
            case.fail_with("composition", &e);
            return case;
        }
    };
    let expected = outer.degree() * inner.degree();
    case.set("expected_degree", expected).set("degree", composed.degree());
    case.require("degree is multiplicative", composed.degree() == expected);
    case.require("valid product", is_valid_product(&composed));
    let probes: Vec<ComplexPoint> = (0..COMPOSE_PROBES)
        .map(|_| sample_disc(&mut rng, ZERO_RADIUS))
        .collect();
    let sup = probes
        .iter()
        .map(|&z| {
            let direct = outer.eval(inner.eval(z).0).0;
            (composed.eval(z).0 - direct).norm()
        })
        .fold(0.0, f64::max);
    case.set("sup_error", sup);
    if !case.require("pointwise agreement", sup < COMPOSE_TOL) {
        case.set("probes", points_json(&probes));
    }
    case
}

/// Random pairs of degree ≤ 3 compose to a valid product of the product
/// degree that agrees with pointwise composition.
pub fn check_theorem_b(seed: u64, n_pairs: usize) -> SuiteReport {
    let start = Instant::now();
    SuiteReport {
        suite: "theorem-b".into(),
        seed: Some(seed),
        cases: run_cases(n_pairs, |i| compose_case(seed, i)),
        wall_time: start.elapsed(),
    }
}

fn census_case(seed: u64, index: usize) -> CaseRecord {
    let mut rng = case_rng(seed, index);
    let mut case = CaseRecord::new(index, "product");
    let b = match sample_blaschke(&mut rng, 2..=6) {
        Ok(b) => b,
        Err(e) => {
            case.fail_with("construction", &e);
            return case;
        }
    };
    case.set("map", b.to_spec().to_json()).set("expected", b.degree() - 1);
    match blaschke_critical_points(&b, &RootConfig::default()) {
        Ok(census) => {
            case.set("census", census.multiplicity_sum())
                .set("critical_points", points_json(&census.with_multiplicity()));
            case.require("census nonempty", !census.is_empty());
            case.require("census equals degree - 1", census.multiplicity_sum() == b.degree() - 1);
        }
        Err(e) => case.fail_with("census", &e),
    }
    case
}

fn mobius_case(seed: u64, index: usize) -> CaseRecord {
    let mut rng = case_rng(seed, index);
    let mut case = CaseRecord::new(index, "mobius");
    let alpha = sample_disc(&mut rng, ZERO_RADIUS);
    let lambda = super::sample_unimodular(&mut rng);
    let m = match MobiusAutomorphism::new(alpha, lambda) {
        Ok(m) => m,
        Err(e) => {
            case.fail_with("construction", &e);
            return case;
        }
    };
    case.set("map", m.to_spec().to_json());
    match blaschke_critical_points(&m.to_blaschke(), &RootConfig::default()) {
        Ok(census) => {
            case.set("census", census.multiplicity_sum());
            case.require("census empty", census.is_empty());
        }
        Err(e) => case.fail_with("census", &e),
    }
    let opaque = DiscMapHandle::new(m).opaque("random automorphism");
    match mobius_recover(&opaque, &RecoverConfig::default()) {
        Ok(rec) => {
            case.set("recovered_alpha", complex_json(rec.mobius.alpha()))
                .set("recovered_lambda", complex_json(rec.mobius.lambda()))
                .set("sup_error", rec.sup_error);
            case.require("recovery sup-error", rec.sup_error < RECOVERY_TOL);
        }
        Err(e) => case.fail_with("recovery", &e),
    }
    case
}

/// Products of degree 2..=6 have exactly `degree − 1` critical points in the
/// disc; automorphisms have none and are recovered from opaque evaluation.
pub fn check_theorem_c(seed: u64, n_products: usize, n_mobius: usize) -> SuiteReport {
    let start = Instant::now();
    let cases = run_cases(n_products + n_mobius, |i| {
        if i < n_products {
            census_case(seed, i)
        } else {
            mobius_case(seed, i)
        }
    });
    SuiteReport {
        suite: "theorem-c".into(),
        seed: Some(seed),
        cases,
        wall_time: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_forward_run() {
        let report = check_theorem_a(1, 4, 3);
        assert_eq!(report.cases.len(), 6);
        assert!(report.passed(), "{}", report.to_json_lines());
        let half = &report.cases[4];
        assert_eq!(half.data["distinct_counts"], json!([0, 1]));
    }

    #[test]
    fn deterministic_reports() {
        let a = check_theorem_b(3, 5).to_json_lines();
        let b = check_theorem_b(3, 5).to_json_lines();
        assert_eq!(a, b);
        assert!(check_theorem_b(3, 5).passed());
    }

    #[test]
    fn census_run_finds_critical_points() {
        let report = check_theorem_c(2, 5, 3);
        assert!(report.passed(), "{}", report.to_json_lines());
        assert_eq!(report.cases.iter().filter(|c| c.label == "mobius").count(), 3);
        for case in report.cases.iter().filter(|c| c.label == "product") {
            assert!(case.data["census"].as_u64().unwrap() >= 1);
        }
    }

    #[test]
    fn broken_product_is_reported() {
        let mut case = CaseRecord::new(0, "x");
        case.require("a", true);
        assert!(case.passed);
        case.require("b", false);
        assert!(!case.passed);
        assert_eq!(case.data["failed_checks"], json!(["b"]));
    }
}
