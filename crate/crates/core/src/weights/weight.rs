//! The evaluation interface shared by all weights.

use std::fmt;
use std::sync::Arc;

/// A real function on `ℝⁿ`.
pub trait Weight: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
}

impl<W: Weight + ?Sized> Weight for &W {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<W: Weight + ?Sized> Weight for Arc<W> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

impl<W: Weight + ?Sized> Weight for Box<W> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

/// Adapts a closure to [`Weight`].
#[derive(Clone)]
pub struct FnWeight<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnWeight<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnWeight { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Weight for FnWeight<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

impl<F> fmt::Debug for FnWeight<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnWeight").field("dim", &self.dim).finish()
    }
}
