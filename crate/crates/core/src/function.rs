//! Evaluation oracles for proper lower semicontinuous functions.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::ext::ExtReal;

/// Class metadata a function may carry.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FnMeta {
    pub convex: bool,
    pub locally_lipschitz: bool,
    pub lipschitz_const: Option<f64>,
    /// Regular in the sense `f^d = f^up` at every point of interest.
    pub regular: bool,
    /// Optional box `[lo_i, hi_i]` outside which the function is `+inf`.
    pub domain_hint: Option<Vec<(f64, f64)>>,
}

/// A deterministic evaluation oracle `R^n -> (-inf, +inf]`.
///
/// Implementations must never return `-inf`.
pub trait ScalarFn: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> ExtReal;
    fn meta(&self) -> FnMeta {
        FnMeta::default()
    }
}

pub type SharedFn = Arc<dyn ScalarFn>;

/// A [`ScalarFn`] backed by a closure returning `f64`.
///
/// `+inf` and NaN results both read as `+inf` (outside the domain).
pub struct ClosureFn<F> {
    dim: usize,
    meta: FnMeta,
    f: F,
}

impl<F> ClosureFn<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        ClosureFn {
            dim,
            meta: FnMeta::default(),
            f,
        }
    }

    pub fn with_meta(mut self, meta: FnMeta) -> Self {
        self.meta = meta;
        self
    }
}

impl<F> ScalarFn for ClosureFn<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> ExtReal {
        let v = (self.f)(x);
        if v.is_nan() || v == f64::INFINITY {
            ExtReal::PosInf
        } else if v == f64::NEG_INFINITY {
            // properness: clamp rather than leak -inf
            ExtReal::Finite(f64::MIN)
        } else {
            ExtReal::Finite(v)
        }
    }

    fn meta(&self) -> FnMeta {
        self.meta.clone()
    }
}

/// Wraps a closure as a shared function.
pub fn shared<F>(dim: usize, meta: FnMeta, f: F) -> SharedFn
where
    F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
{
    Arc::new(ClosureFn::new(dim, f).with_meta(meta))
}

/// `f + c` with the same metadata.
pub struct Shifted {
    pub inner: SharedFn,
    pub shift: f64,
}

impl ScalarFn for Shifted {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &[f64]) -> ExtReal {
        match self.inner.eval(x) {
            ExtReal::Finite(v) => ExtReal::Finite(v + self.shift),
            other => other,
        }
    }
    fn meta(&self) -> FnMeta {
        self.inner.meta()
    }
}

/// The Lipschitz constant if the metadata declares local Lipschitzness.
pub(crate) fn lipschitz_of(f: &dyn ScalarFn) -> Option<f64> {
    let m = f.meta();
    if m.locally_lipschitz {
        Some(m.lipschitz_const.unwrap_or(1.0))
    } else {
        None
    }
}
