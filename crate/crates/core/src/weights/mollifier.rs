//! The normalized bump kernel and mollification of weights by tensor quadrature.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::MAX_DIM;
use crate::numerics::quadrature::{adaptive_integrate, composite_gauss_legendre};
use crate::numerics::sum::CompensatedSum;

use super::conditions::find_convexity_violation;
use super::{Weight, WeightFunction};

/// Panels per axis of the composite rule used for mollification.
pub const MOLLIFIER_PANELS: usize = 4;
/// Smallest accepted number of nodes per panel.
pub const MIN_QUADRATURE_ORDER: usize = 8;

/// Nodes per panel used when no order is requested.
pub const DEFAULT_QUADRATURE_ORDER: usize = 32;

fn bump_unnormalized(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// `c = 1 / ∫ exp(-1/(1-t²)) dt`, computed once.
pub fn bump_normalization() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| 1.0 / adaptive_integrate(bump_unnormalized, -1.0, 1.0, 1e-15).0)
}

/// `χ(t) = c·exp(-1/(1-t²))` on `(-1, 1)`, zero elsewhere.
pub fn chi(t: f64) -> f64 {
    bump_normalization() * bump_unnormalized(t)
}

/// `ω(x) = Πⱼ χ(xⱼ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BumpKernel {
    dim: usize,
}

pub fn bump_mollifier(dim: usize) -> Result<BumpKernel> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(BumpKernel { dim })
}

impl Weight for BumpKernel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&t| chi(t)).product()
    }
}

/// Tensor-product rule for `∫ f(ξ) ω(ξ) dξ` over `[-1, 1]ⁿ`: composite
/// Gauss-Legendre in each axis with the kernel folded into the weights, which
/// are then rescaled to unit total mass.
#[derive(Clone, Debug)]
pub struct TensorRule {
    dim: usize,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TensorRule {
    pub fn new(kernel: &BumpKernel, order: usize) -> Result<Self> {
        if order < MIN_QUADRATURE_ORDER {
            return Err(Error::QuadratureOrder(order));
        }
        let (x, w) = composite_gauss_legendre(order, MOLLIFIER_PANELS, -1.0, 1.0);
        let raw: Vec<f64> = x.iter().zip(&w).map(|(&xi, &wi)| wi * chi(xi)).collect();
        let mass: f64 = raw.iter().copied().collect::<CompensatedSum>().value();
        Ok(TensorRule {
            dim: kernel.dim,
            order,
            nodes: x,
            weights: raw.iter().map(|v| v / mass).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let m = self.nodes.len();
        let mut xi = [0.0; MAX_DIM];
        let mut acc = CompensatedSum::new();
        let total = m.pow(self.dim as u32);
        for flat in 0..total {
            let mut r = flat;
            let mut w = 1.0;
            for k in (0..self.dim).rev() {
                let i = r % m;
                r /= m;
                xi[k] = self.nodes[i];
                w *= self.weights[i];
            }
            acc.add(w * f(&xi[..self.dim]));
        }
        acc.value()
    }
}

/// `x ↦ ∫ φ(x + ξ) ω(ξ) dξ`. Rejects non-convex `φ`, for which the
/// mollified weight need not dominate `φ`.
pub fn mollify(
    phi: Arc<WeightFunction>,
    kernel: &BumpKernel,
    order: usize,
) -> Result<WeightFunction> {
    if phi.dim() != kernel.dim() {
        return Err(Error::InvalidArgument(format!(
            "{}-dimensional weight with a {}-dimensional kernel",
            phi.dim(),
            kernel.dim()
        )));
    }
    if phi.dim() > 2 {
        return Err(Error::UnsupportedDimension(phi.dim()));
    }
    if let Some((x, y)) = find_convexity_violation(phi.as_ref(), 10.0, 400) {
        return Err(Error::Precondition(format!(
            "{} is not convex: midpoint test fails for {x:?} and {y:?}",
            phi.name()
        )));
    }
    let rule = TensorRule::new(kernel, order)?;
    Ok(WeightFunction::mollified(phi, Arc::new(rule)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Profile;

    #[test]
    fn bump_is_even_and_normalized() {
        assert_eq!(chi(0.3), chi(-0.3));
        assert_eq!(chi(1.0), 0.0);
        assert_eq!(chi(-1.0), 0.0);
        let coarse = adaptive_integrate(chi, -1.0, 1.0, 1e-12).0;
        let fine = adaptive_integrate(chi, -1.0, 1.0, 1e-14).0;
        assert!((coarse - 1.0).abs() < 1e-10);
        assert!((fine - 1.0).abs() < 1e-10);
        let k = bump_mollifier(2).unwrap();
        assert_eq!(k.eval(&[0.0, 0.0]), chi(0.0) * chi(0.0));
    }

    #[test]
    fn low_order_is_rejected() {
        let k = bump_mollifier(1).unwrap();
        assert!(matches!(
            TensorRule::new(&k, 4),
            Err(Error::QuadratureOrder(4))
        ));
    }

    #[test]
    fn square_gains_second_moment() {
        let k = bump_mollifier(1).unwrap();
        let phi = Arc::new(WeightFunction::radial(Profile::Square, 1.0, 1).unwrap());
        let m = mollify(phi, &k, 32).unwrap();
        let c2 = adaptive_integrate(|t| t * t * chi(t), -1.0, 1.0, 1e-15).0;
        for x in [0.0, 0.5, 3.0, -7.0] {
            assert!((m.eval(&[x]) - x * x - c2).abs() < 1e-10);
        }
    }

    #[test]
    fn concave_weight_is_rejected() {
        let k = bump_mollifier(1).unwrap();
        let phi = Arc::new(
            WeightFunction::custom(
                "0.5 sqrt(1+x^2) capped",
                1,
                crate::weights::Smoothness::CInf,
                |x| -(1.0 + x[0] * x[0]).sqrt(),
            )
            .unwrap(),
        );
        assert!(matches!(mollify(phi, &k, 32), Err(Error::Precondition(_))));
    }
}
