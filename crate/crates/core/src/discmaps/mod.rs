//! Disc automorphisms and finite Blaschke products: evaluation, composition,
//! preimages, critical points and automorphism recovery.

mod blaschke;
mod mobius;
mod recover;

pub use blaschke::{
    blaschke_compose, blaschke_critical_points, blaschke_eval, blaschke_preimages, critical_numerator,
    critical_numerator_roots, BlaschkeProduct, COMPOSE_PROBE, PREIMAGE_RESIDUAL,
};
pub use mobius::{mobius_eval, mobius_inverse, MobiusAutomorphism};
pub use recover::{mobius_recover, RecoverConfig, Recovered};

/// Parameters must satisfy `|a| < 1 − INTERIOR_MARGIN`.
pub const INTERIOR_MARGIN: f64 = 1e-12;

/// Allowed `| |λ| − 1 |`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Roots with `|z| < 1 − ROOT_IN_DISC` are interior, `|z| > 1 + ROOT_IN_DISC`
/// exterior; the annulus in between is a boundary ambiguity.
pub const ROOT_IN_DISC: f64 = 1e-9;
