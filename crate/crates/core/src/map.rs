//! Uniform evaluation abstraction over holomorphic disc maps.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mapspec::MapSpec;
use crate::numerics::ComplexPoint;

/// Slack allowed on `|f(z)| < 1` before a disc-preserving map is flagged.
pub const DISC_SLACK: f64 = 1e-12;

/// A holomorphic map that can report its value and derivative.
pub trait HolomorphicMap: Send + Sync {
    /// `(f(z), f'(z))`.
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)>;

    /// `f(z)` alone, for callers that do not need the derivative.
    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.eval(z).map(|(v, _)| v)
    }

    fn describe(&self) -> String;

    fn spec(&self) -> Option<MapSpec> {
        None
    }

    fn disc_preserving(&self) -> bool {
        true
    }
}

/// Shared handle to any [`HolomorphicMap`].
///
/// Evaluation through the handle rejects non-finite output and, for maps that
/// declare themselves disc-preserving, any interior point mapped to
/// `|f(z)| >= 1 + DISC_SLACK`.
#[derive(Clone)]
pub struct DiscMapHandle {
    inner: Arc<dyn HolomorphicMap>,
}

impl DiscMapHandle {
    pub fn new(map: impl HolomorphicMap + 'static) -> Self {
        DiscMapHandle { inner: Arc::new(map) }
    }

    /// Wraps a closure as an opaque handle with no map spec.
    pub fn from_fn<F>(descriptor: impl Into<String>, f: F) -> Self
    where
        F: Fn(ComplexPoint) -> (ComplexPoint, ComplexPoint) + Send + Sync + 'static,
    {
        DiscMapHandle::new(Opaque {
            descriptor: descriptor.into(),
            f: Box::new(f),
        })
    }

    pub fn identity() -> Self {
        DiscMapHandle::from_fn("identity", |z| (z, Complex64::new(1.0, 0.0)))
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        let (value, deriv) = self.inner.eval(z)?;
        self.check(z, value)?;
        if !finite(deriv) {
            return Err(Error::NonFinite {
                map: self.inner.describe(),
                z,
            });
        }
        Ok((value, deriv))
    }

    pub fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let value = self.inner.value(z)?;
        self.check(z, value)?;
        Ok(value)
    }

    fn check(&self, z: ComplexPoint, value: ComplexPoint) -> Result<()> {
        if !finite(value) {
            return Err(Error::NonFinite {
                map: self.inner.describe(),
                z,
            });
        }
        if self.inner.disc_preserving() && z.norm() < 1.0 && value.norm() >= 1.0 + DISC_SLACK {
            return Err(Error::DiscViolation {
                map: self.inner.describe(),
                z,
                modulus: value.norm(),
            });
        }
        Ok(())
    }

    pub fn descriptor(&self) -> String {
        self.inner.describe()
    }

    pub fn spec(&self) -> Option<MapSpec> {
        self.inner.spec()
    }

    /// Hides the spec and descriptor of this handle behind a closure.
    pub fn opaque(&self, descriptor: impl Into<String>) -> Self {
        let inner = self.clone();
        DiscMapHandle::new(OpaqueFallible {
            descriptor: descriptor.into(),
            inner,
        })
    }

    /// `outer ∘ inner`, differentiated by the chain rule.
    pub fn compose(outer: &DiscMapHandle, inner: &DiscMapHandle) -> Self {
        DiscMapHandle::new(Composition {
            outer: outer.clone(),
            inner: inner.clone(),
        })
    }
}

impl fmt::Debug for DiscMapHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("DiscMapHandle").field(&self.inner.describe()).finish()
    }
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

type EvalFn = dyn Fn(ComplexPoint) -> (ComplexPoint, ComplexPoint) + Send + Sync;

struct Opaque {
    descriptor: String,
    f: Box<EvalFn>,
}

impl HolomorphicMap for Opaque {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        Ok((self.f)(z))
    }

    fn describe(&self) -> String {
        self.descriptor.clone()
    }
}

struct OpaqueFallible {
    descriptor: String,
    inner: DiscMapHandle,
}

impl HolomorphicMap for OpaqueFallible {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        self.inner.eval(z)
    }

    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.inner.value(z)
    }

    fn describe(&self) -> String {
        self.descriptor.clone()
    }
}

struct Composition {
    outer: DiscMapHandle,
    inner: DiscMapHandle,
}

impl HolomorphicMap for Composition {
    fn eval(&self, z: ComplexPoint) -> Result<(ComplexPoint, ComplexPoint)> {
        let (w, dw) = self.inner.eval(z)?;
        let (v, dv) = self.outer.eval(w)?;
        Ok((v, dv * dw))
    }

    fn value(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.outer.value(self.inner.value(z)?)
    }

    fn describe(&self) -> String {
        format!("({}) ∘ ({})", self.outer.descriptor(), self.inner.descriptor())
    }

    fn spec(&self) -> Option<MapSpec> {
        Some(MapSpec::Compose {
            outer: Box::new(self.outer.spec()?),
            inner: Box::new(self.inner.spec()?),
        })
    }
}
