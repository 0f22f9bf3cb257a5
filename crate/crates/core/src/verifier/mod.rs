//! Seeded property campaigns with machine-readable reports.
//!
//! Each case draws from its own ChaCha8 stream (`seed`, stream = case index),
//! so any single case can be re-run without replaying the others. Cases run in
//! parallel and are assembled in index order.
//!
//! Report format, one JSON object per line:
//!
//! ```text
//! {"suite":"theorem-a","seed":1,"case":0,"label":"product","status":"pass",...case data}
//! ...
//! {"summary":{"suite":"theorem-a","seed":1,"cases":20,"failures":0}}
//! ```

mod classical;
mod hurwitz;
mod pipeline;
mod slit;

pub use classical::{check_theorem_a, check_theorem_b, check_theorem_c};
pub use hurwitz::{demo_hurwitz_escape, hurwitz_report, HurwitzTable};
pub use pipeline::{
    canonical_candidates, check_pipeline_suite, check_theorem_3_1, Candidate, Verdict, CANONICAL_VALENCE_BOUND,
};
pub use slit::check_theorem_3_2;

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::time::Duration;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::discmaps::BlaschkeProduct;
use crate::error::Result;
use crate::mapspec::complex_json;
use crate::numerics::ComplexPoint;

/// Largest modulus of randomly drawn zeros.
pub const ZERO_RADIUS: f64 = 0.95;
/// Largest modulus of randomly drawn targets.
pub const TARGET_RADIUS: f64 = 0.9;

#[derive(Clone, Debug, PartialEq)]
pub struct CaseRecord {
    pub index: usize,
    pub label: String,
    pub passed: bool,
    /// Reproduction data: map spec, targets, radii, observed vs expected.
    pub data: Map<String, Value>,
}

impl CaseRecord {
    pub fn new(index: usize, label: impl Into<String>) -> Self {
        CaseRecord {
            index,
            label: label.into(),
            passed: true,
            data: Map::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.data.insert(key.to_string(), value.into());
        self
    }

    /// Records the check and marks the case failed if it does not hold.
    pub fn require(&mut self, check: &str, ok: bool) -> bool {
        if !ok {
            self.passed = false;
            let failed = self.data.entry("failed_checks").or_insert_with(|| json!([]));
            if let Value::Array(list) = failed {
                list.push(json!(check));
            }
        }
        ok
    }

    pub fn fail_with(&mut self, check: &str, err: &crate::Error) {
        self.require(check, false);
        self.set("error", err.to_string());
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: Option<u64>,
    pub cases: Vec<CaseRecord>,
    /// Not serialized, so reports stay byte-identical across runs.
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.passed)
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count()
    }

    pub fn passed(&self) -> bool {
        !self.cases.is_empty() && self.failure_count() == 0
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for case in &self.cases {
            let mut line = Map::new();
            line.insert("suite".into(), json!(self.suite));
            line.insert("seed".into(), json!(self.seed));
            line.insert("case".into(), json!(case.index));
            line.insert("label".into(), json!(case.label));
            line.insert("status".into(), json!(if case.passed { "pass" } else { "fail" }));
            for (k, v) in &case.data {
                line.insert(k.clone(), v.clone());
            }
            let _ = writeln!(out, "{}", Value::Object(line));
        }
        let summary = json!({
            "summary": {
                "suite": self.suite,
                "seed": self.seed,
                "cases": self.cases.len(),
                "failures": self.failure_count(),
            }
        });
        let _ = writeln!(out, "{summary}");
        out
    }
}

/// The RNG for one case.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Area-uniform point in the disc of radius `rmax`.
pub fn sample_disc(rng: &mut impl Rng, rmax: f64) -> ComplexPoint {
    let r = rmax * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.random::<f64>())
}

pub fn sample_unimodular(rng: &mut impl Rng) -> ComplexPoint {
    Complex64::from_polar(1.0, TAU * rng.random::<f64>())
}

/// Uniform degree in `degrees`, area-uniform zeros of modulus ≤ 0.95 and a
/// uniform unimodular factor.
pub fn sample_blaschke(rng: &mut impl Rng, degrees: std::ops::RangeInclusive<usize>) -> Result<BlaschkeProduct> {
    let degree = rng.random_range(degrees);
    let lambda = sample_unimodular(rng);
    let zeros = (0..degree).map(|_| sample_disc(rng, ZERO_RADIUS)).collect();
    BlaschkeProduct::new(lambda, zeros)
}

pub(crate) fn spec_json(spec: Option<crate::MapSpec>) -> Value {
    spec.map(|s| s.to_json()).unwrap_or(Value::Null)
}

pub(crate) fn points_json(points: &[ComplexPoint]) -> Value {
    Value::Array(points.iter().map(|z| complex_json(*z)).collect())
}

/// Runs `case` for every index in parallel, in index order.
pub(crate) fn run_cases(count: usize, case: impl Fn(usize) -> CaseRecord + Send + Sync) -> Vec<CaseRecord> {
    (0..count).into_par_iter().map(case).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: f64 = case_rng(1, 3).random();
        let b: f64 = case_rng(1, 3).random();
        let c: f64 = case_rng(1, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn disc_samples_stay_inside() {
        let mut rng = case_rng(9, 0);
        for _ in 0..1000 {
            assert!(sample_disc(&mut rng, 0.95).norm() <= 0.95);
        }
        let b = sample_blaschke(&mut rng, 1..=6).unwrap();
        assert!((1..=6).contains(&b.degree()));
    }

    #[test]
    fn json_lines_layout() {
        let mut case = CaseRecord::new(0, "demo");
        case.set("observed", 2);
        case.require("count", false);
        let report = SuiteReport {
            suite: "x".into(),
            seed: Some(4),
            cases: vec![case],
            wall_time: Duration::ZERO,
        };
        assert_eq!(
            report.to_json_lines(),
            concat!(
                r#"{"suite":"x","seed":4,"case":0,"label":"demo","status":"fail","observed":2,"failed_checks":["count"]}"#,
                "\n",
                r#"{"summary":{"suite":"x","seed":4,"cases":1,"failures":1}}"#,
                "\n"
            )
        );
        assert!(!report.passed());
    }
}
