use crate::error::{Error, Result};
use crate::grid::centered_axis;
use crate::numerics::optimize::SearchConfig;
use crate::numerics::sum::compensated_sum;
use crate::weights::Weight;

use super::{affine_gap, discrete_log_conjugate};

/// The conjugate `u*` of a weight, evaluated pointwise by grid conjugation on
/// a zooming grid.
///
/// Each step takes the exact maximum of `⟨s, y⟩ - u(y)` over a small uniform
/// grid around the current center. A maximizer on the grid boundary moves the
/// center there and doubles the grid; an interior maximizer recenters and
/// halves it. The current center is always a grid node, so the value never
/// decreases from one step to the next.
#[derive(Clone, Debug)]
pub struct AdaptiveConjugate<W> {
    u: W,
    nodes: usize,
    initial_half_width: f64,
    min_half_width: f64,
    max_steps: usize,
}

impl<W: Weight> AdaptiveConjugate<W> {
    pub fn new(u: W) -> Self {
        let nodes = if u.dim() == 1 { 17 } else { 9 };
        AdaptiveConjugate {
            u,
            nodes,
            initial_half_width: 4.0,
            min_half_width: 1e-9,
            max_steps: 600,
        }
    }

    pub fn inner(&self) -> &W {
        &self.u
    }

    /// `u*(s)` together with the maximizing point.
    pub fn conjugate_at(&self, s: &[f64]) -> Result<(f64, Vec<f64>)> {
        let n = self.u.dim();
        let mut center = vec![0.0; n];
        let mut half = self.initial_half_width;
        let mut y = vec![0.0; n];
        let total = self.nodes.pow(n as u32);
        for _ in 0..self.max_steps {
            let axes: Vec<Vec<f64>> = center
                .iter()
                .map(|&c| centered_axis(c, half, self.nodes))
                .collect();
            let mut best = f64::NEG_INFINITY;
            let mut arg = None;
            for flat in 0..total {
                let mut r = flat;
                for k in (0..n).rev() {
                    y[k] = axes[k][r % self.nodes];
                    r /= self.nodes;
                }
                let uy = self.u.eval(&y);
                if uy.is_finite() {
                    let v = affine_gap(s, &y, uy);
                    if v > best {
                        best = v;
                        arg = Some(flat);
                    }
                }
            }
            let Some(arg) = arg else {
                return Err(Error::NotLocalized(0));
            };
            let mut r = arg;
            let mut on_face = false;
            for k in (0..n).rev() {
                let i = r % self.nodes;
                r /= self.nodes;
                on_face |= i == 0 || i + 1 == self.nodes;
                center[k] = axes[k][i];
            }
            if on_face {
                half *= 2.0;
            } else {
                half *= 0.5;
                let scale = 1.0 + center.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                if half < self.min_half_width * scale {
                    return Ok((best, center));
                }
            }
        }
        Err(Error::NotLocalized(self.max_steps as u32))
    }
}

impl<W: Weight> Weight for AdaptiveConjugate<W> {
    fn dim(&self) -> usize {
        self.u.dim()
    }

    fn eval(&self, s: &[f64]) -> f64 {
        self.conjugate_at(s).map_or(f64::INFINITY, |(v, _)| v)
    }
}

/// `Σ_{xⱼ ≠ 0} (xⱼ ln xⱼ - xⱼ)`.
pub fn log_entropy(x: &[f64]) -> f64 {
    compensated_sum(x.iter().filter(|&&v| v != 0.0).map(|&v| v * v.ln() - v))
}

/// `(u[e])*(x) + (u*[e])*(x)` for `x ∈ [0, ∞)ⁿ`, with `u*` from [`AdaptiveConjugate`].
pub fn duality_sum<W: Weight>(u: &W, x: &[f64], cfg: &SearchConfig) -> Result<f64> {
    if x.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(
            "duality gap needs a point in [0, inf)^n".into(),
        ));
    }
    let a = discrete_log_conjugate(u, x, cfg)?;
    let ustar = AdaptiveConjugate::new(u);
    let b = discrete_log_conjugate(&ustar, x, cfg)?;
    match (a.finite(), b.finite()) {
        (Some(a), Some(b)) => Ok(a + b),
        _ => Err(Error::InvalidArgument(
            "infinite conjugate in duality gap".into(),
        )),
    }
}

/// `(u[e])*(x) + (u*[e])*(x) - Σ_{xⱼ≠0}(xⱼ ln xⱼ - xⱼ)`.
pub fn duality_gap<W: Weight>(u: &W, x: &[f64], cfg: &SearchConfig) -> Result<f64> {
    Ok(duality_sum(u, x, cfg)? - log_entropy(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::FnWeight;

    #[test]
    fn adaptive_conjugate_of_quadratic() {
        let u = FnWeight::new(1, |x: &[f64]| x[0] * x[0]);
        let c = AdaptiveConjugate::new(u);
        for s in [0.0, 0.7, 3.0, 250.0] {
            let (v, y) = c.conjugate_at(&[s]).unwrap();
            assert!((v - s * s / 4.0).abs() < 1e-12 * (1.0 + s * s), "s = {s}");
            assert!((y[0] - s / 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn gap_vanishes_for_square_weight() {
        let u = FnWeight::new(1, |x: &[f64]| x[0] * x[0]);
        let cfg = SearchConfig::default();
        assert_eq!(duality_gap(&u, &[0.0], &cfg).unwrap(), 0.0);
        assert!(duality_gap(&u, &[1.0], &cfg).unwrap().abs() < 1e-6);
    }
}
