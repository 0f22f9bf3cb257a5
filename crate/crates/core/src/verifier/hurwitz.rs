//! The escaping sequence `B_n` (zeros `0` and `1 − 1/n`) tends to `−z`
//! locally uniformly, yet every `B_n` keeps valence 2 while the limit has
//! valence 1: one preimage runs off to the boundary. Valence passes to limits
//! only under uniform convergence.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;

use super::{CaseRecord, SuiteReport};
use crate::discmaps::MobiusAutomorphism;
use crate::error::{Error, Result};
use crate::gallery::{frostman_shift, make_atomic_inner, make_escape_sequence};
use crate::map::DiscMapHandle;
use crate::mapspec::complex_json;
use crate::numerics::{unit, ComplexPoint};
use crate::valence::{default_schedule, valence_at, ValenceOptions};

const ESCAPE_VALENCE: i64 = 2;
const LIMIT_VALENCE: i64 = 1;
const FROSTMAN_SHIFT: f64 = 1e-3;
const FROSTMAN_RADII: usize = 40;
const FROSTMAN_ANGLES: usize = 64;
const FROSTMAN_MAX_RADIUS: f64 = 0.999;

#[derive(Clone, Debug, PartialEq)]
pub struct HurwitzTable {
    pub w: ComplexPoint,
    pub rows: Vec<(u32, i64)>,
    /// Valence of the locally uniform limit `−z`.
    pub limit: i64,
}

impl HurwitzTable {
    /// `n,valence` rows followed by a `limit` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,valence\n");
        for (n, v) in &self.rows {
            let _ = writeln!(out, "{n},{v}");
        }
        let _ = writeln!(out, "limit,{}", self.limit);
        out
    }
}

fn limit_map() -> DiscMapHandle {
    DiscMapHandle::new(
        MobiusAutomorphism::new(Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)).expect("−z is an automorphism"),
    )
}

/// Valence of `B_n` at `w` for each `n`, over the full radius schedule, and
/// of the limit `−z`.
pub fn demo_hurwitz_escape(n_list: &[u32], w: ComplexPoint) -> Result<HurwitzTable> {
    if !(w.norm() < 0.5) {
        return Err(Error::invalid(format!("target {w} must satisfy |w| < 0.5")));
    }
    let schedule = default_schedule();
    let opts = ValenceOptions::default();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let report = valence_at(&make_escape_sequence(n)?, w, &schedule, &opts)?;
        rows.push((n, report.value));
    }
    let limit = valence_at(&limit_map(), w, &schedule, &opts)?.value;
    Ok(HurwitzTable { w, rows, limit })
}

/// Sup of `|F_a + S|` over a polar grid, against `2|a|/(1 − |a|)`.
fn frostman_case(index: usize) -> CaseRecord {
    let mut case = CaseRecord::new(index, "frostman-distance");
    let a = Complex64::new(FROSTMAN_SHIFT, 0.0);
    let s = make_atomic_inner();
    let bound = 2.0 * a.norm() / (1.0 - a.norm());
    case.set("a", complex_json(a)).set("bound", bound);
    let shifted = match frostman_shift(&s, a) {
        Ok(f) => f,
        Err(e) => {
            case.fail_with("construction", &e);
            return case;
        }
    };
    let mut sup = 0.0f64;
    for i in 0..FROSTMAN_RADII {
        let r = FROSTMAN_MAX_RADIUS * (i + 1) as f64 / FROSTMAN_RADII as f64;
        for j in 0..FROSTMAN_ANGLES {
            let z = unit(TAU * j as f64 / FROSTMAN_ANGLES as f64) * r;
            match (shifted.value(z), s.value(z)) {
                (Ok(fa), Ok(sz)) => sup = sup.max((fa + sz).norm()),
                (Err(e), _) | (_, Err(e)) => {
                    case.fail_with("evaluation", &e);
                    return case;
                }
            }
        }
    }
    case.set("sup_distance", sup);
    case.require("distance bound", sup <= bound);
    case
}

/// The escape table as a suite: every `B_n` has valence 2, the limit 1, and a
/// Frostman shift of the atomic inner function stays within its distance bound.
pub fn hurwitz_report(n_list: &[u32], w: ComplexPoint) -> SuiteReport {
    let start = Instant::now();
    let mut cases = Vec::new();
    match demo_hurwitz_escape(n_list, w) {
        Ok(table) => {
            for (i, (n, v)) in table.rows.iter().enumerate() {
                let mut case = CaseRecord::new(i, "escape");
                case.set("n", *n)
                    .set("w", complex_json(w))
                    .set("valence", *v)
                    .set("expected", ESCAPE_VALENCE);
                case.require("valence 2", *v == ESCAPE_VALENCE);
                cases.push(case);
            }
            let mut case = CaseRecord::new(cases.len(), "limit");
            case.set("w", complex_json(w))
                .set("valence", table.limit)
                .set("expected", LIMIT_VALENCE);
            case.require("limit valence 1", table.limit == LIMIT_VALENCE);
            cases.push(case);
        }
        Err(e) => {
            let mut case = CaseRecord::new(0, "escape");
            case.set("w", complex_json(w));
            case.fail_with("valence", &e);
            cases.push(case);
        }
    }
    cases.push(frostman_case(cases.len()));
    SuiteReport {
        suite: "hurwitz-demo".into(),
        seed: None,
        cases,
        wall_time: start.elapsed(),
    }
}
