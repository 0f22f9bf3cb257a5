//! Numerical laboratory for holomorphic self-maps of the unit disc: finite
//! Blaschke products and Möbius automorphisms, argument-principle valence,
//! a gallery of explicit maps, and seeded verification suites.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discmaps;
pub mod error;
pub mod gallery;
pub mod map;
pub mod mapspec;
pub mod numerics;
pub mod valence;
pub mod verifier;

pub use discmaps::{BlaschkeProduct, MobiusAutomorphism};
pub use error::{Error, Result};
pub use map::{DiscMapHandle, HolomorphicMap};
pub use mapspec::{GallerySpec, MapSpec};
pub use numerics::ComplexPoint;
