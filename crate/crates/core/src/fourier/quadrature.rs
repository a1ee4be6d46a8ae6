//! Fourier transforms `f̂(x) = ∫ f(ξ) e^{-i⟨x,ξ⟩} dξ` of the closed-form
//! test functions by the uniform trapezoid rule on a truncated box.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::numerics::sum::CompensatedSum;
use crate::seminorm::test_function::{hermite_coefficients, hermite_values};
use crate::seminorm::TestFunction;

use super::surface::half_gamma;

/// Largest admissible integrand mass outside the truncation box.
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Tail mass targeted when a radius is chosen automatically.
pub const TARGET_TAIL: f64 = 1e-12;
const RADIUS_STEP: f64 = 0.25;
const MAX_RADIUS: f64 = 1e3;

/// Nodes per axis used unless a rule is given explicitly.
pub fn default_nodes(dim: usize) -> usize {
    if dim == 1 {
        2048
    } else {
        512
    }
}

/// Uniform trapezoid rule on `[-R, R)ⁿ`: nodes `-R + k·2R/N`, `k < N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub radius: f64,
    pub nodes: usize,
    /// Bound on the integrand mass outside the box.
    pub tail_bound: f64,
}

impl QuadratureSpec {
    pub fn new(radius: f64, nodes: usize, tail_bound: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "truncation radius must be positive, got {radius}"
            )));
        }
        if nodes < 4 || nodes % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "node count must be even and at least 4, got {nodes}"
            )));
        }
        if tail_bound.is_nan() || tail_bound < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tail bound must be non-negative, got {tail_bound}"
            )));
        }
        Ok(QuadratureSpec {
            radius,
            nodes,
            tail_bound,
        })
    }

    /// Rule for the transforms of `(-iξ)^α f` with `|α| ≤ max_order`.
    pub fn for_function(f: &TestFunction, max_order: u32) -> Result<Self> {
        let env = Envelope::function(f, max_order);
        let (radius, tail_bound) = env.radius_for(TARGET_TAIL)?;
        Self::new(radius, default_nodes(f.dim()), tail_bound)
    }

    /// Rule for integrating `f̂` itself.
    pub fn for_transform(f: &TestFunction) -> Result<Self> {
        let env = Envelope::transform(f);
        let (radius, tail_bound) = env.radius_for(TARGET_TAIL)?;
        Self::new(radius, default_nodes(f.dim()), tail_bound)
    }

    pub fn step(&self) -> f64 {
        2.0 * self.radius / self.nodes as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.nodes)
            .map(|k| -self.radius + k as f64 * h)
            .collect()
    }

    fn check_tail(&self) -> Result<()> {
        if self.tail_bound < TAIL_TOLERANCE {
            Ok(())
        } else {
            Err(Error::TailTooLarge {
                bound: self.tail_bound,
                tolerance: TAIL_TOLERANCE,
            })
        }
    }
}

/// `Σ cᵢ |t|ⁱ e^{-a t²}` per axis, dominating the integrand on all of `ℝ`.
#[derive(Clone, Debug)]
pub(crate) struct AxisEnvelope {
    coeffs: Vec<f64>,
    a: f64,
}

impl AxisEnvelope {
    /// Mass on `|t| > radius`, from `tᵖe^{-at²} ≤ Rᵖe^{-aR²}e^{-(2aR - p/R)(t-R)}`.
    fn tail(&self, radius: f64) -> f64 {
        let r = radius;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0.0)
            .map(|(p, c)| {
                let rate = 2.0 * self.a * r - p as f64 / r;
                if rate <= 0.0 {
                    f64::INFINITY
                } else {
                    2.0 * c * (p as f64 * r.ln() - self.a * r * r).exp() / rate
                }
            })
            .sum()
    }

    /// Mass on `ℝ`, `Σ cᵢ Γ((i+1)/2) / a^{(i+1)/2}`.
    fn total(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| c * half_gamma(p as u32 + 1) / self.a.powf((p as f64 + 1.0) / 2.0))
            .sum()
    }
}

/// Product envelope `|c| Π_j env_j(t_j)`.
#[derive(Clone, Debug)]
pub(crate) struct Envelope {
    scale: f64,
    axes: Vec<AxisEnvelope>,
}

impl Envelope {
    /// Dominates `|ξ^α f(ξ)|` for every `|α| ≤ max_order` via `|t|^k ≤ 1 + |t|^{max_order}`.
    pub(crate) fn function(f: &TestFunction, max_order: u32) -> Self {
        let axes = f
            .factors()
            .iter()
            .map(|fac| {
                let p = abs_coeffs(&fac.polynomial());
                let mut c = p.clone();
                if max_order > 0 {
                    c = poly_add(&c, &shift(&p, max_order as usize));
                }
                AxisEnvelope {
                    coeffs: c,
                    a: fac.a(),
                }
            })
            .collect();
        Envelope {
            scale: f.scale().abs(),
            axes,
        }
    }

    /// Dominates `|ζ^α f(ξ + iη)|` with the power `alpha` and shift `eta`,
    /// via `|ξ + iη| ≤ |ξ| + |η|`.
    pub(crate) fn shifted(f: &TestFunction, alpha: &MultiIndex, eta: &[f64]) -> Self {
        let axes = f
            .factors()
            .iter()
            .zip(eta)
            .zip(alpha.components())
            .map(|((fac, &e), &k)| {
                let p = fac.polynomial();
                let mut c = vec![0.0; p.len() + k as usize];
                for (i, &ci) in p.iter().enumerate() {
                    for (l, b) in binomial_row(i + k as usize).into_iter().enumerate() {
                        c[l] += ci.abs() * b * e.abs().powi((i + k as usize - l) as i32);
                    }
                }
                let a = fac.a();
                let lift = (a * e * e).exp();
                AxisEnvelope {
                    coeffs: c.into_iter().map(|v| v * lift).collect(),
                    a,
                }
            })
            .collect();
        Envelope {
            scale: f.scale().abs(),
            axes,
        }
    }

    /// Dominates `|f̂|` from the closed form of each factor's transform.
    pub(crate) fn transform(f: &TestFunction) -> Self {
        let axes = f
            .factors()
            .iter()
            .map(|fac| {
                let a = fac.a();
                let s = 1.0 / (2.0 * a.sqrt());
                let g0 = (PI / a).sqrt();
                let p = fac.polynomial();
                let mut c = vec![0.0; p.len()];
                for (i, &ci) in p.iter().enumerate() {
                    for (l, h) in hermite_coefficients(i as u32).into_iter().enumerate() {
                        c[l] += ci.abs() * s.powi(i as i32) * h.abs() * s.powi(l as i32) * g0;
                    }
                }
                AxisEnvelope {
                    coeffs: c,
                    a: 1.0 / (4.0 * a),
                }
            })
            .collect();
        Envelope {
            scale: f.scale().abs(),
            axes,
        }
    }

    /// `∫_{ℝⁿ \ [-R,R]ⁿ} ≤ Σ_j tail_j Π_{k≠j} total_k`.
    pub(crate) fn tail(&self, radius: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        let totals: Vec<f64> = self.axes.iter().map(AxisEnvelope::total).collect();
        let sum: f64 = self
            .axes
            .iter()
            .enumerate()
            .map(|(j, e)| {
                let others: f64 = totals
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, t)| t)
                    .product();
                e.tail(radius) * others
            })
            .sum();
        self.scale * sum
    }

    /// Smallest radius on a `0.25` lattice with tail below `target`.
    pub(crate) fn radius_for(&self, target: f64) -> Result<(f64, f64)> {
        let mut r = 1.0;
        loop {
            let t = self.tail(r);
            if t <= target {
                return Ok((r, t));
            }
            r += RADIUS_STEP;
            if r > MAX_RADIUS {
                return Err(Error::TailTooLarge {
                    bound: t,
                    tolerance: target,
                });
            }
        }
    }
}

fn abs_coeffs(p: &[f64]) -> Vec<f64> {
    p.iter().map(|c| c.abs()).collect()
}

fn shift(p: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![0.0; k];
    out.extend_from_slice(p);
    out
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 0..n {
        row.push(row[k] * (n - k) as f64 / (k + 1) as f64);
    }
    row
}

/// A transform value with the node-halving discrepancy plus the tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransformValue {
    pub re: f64,
    pub im: f64,
    pub error_estimate: f64,
}

impl TransformValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `(fine, coarse)` trapezoid sums of `g(ξ) e^{i·sign·xξ}` from the node
/// values of `g`, the coarse rule using every other node.
pub(super) fn axis_sum(
    g: &[Complex64],
    spec: &QuadratureSpec,
    x: f64,
    sign: f64,
) -> (Complex64, Complex64) {
    let h = spec.step();
    let (mut fr, mut fi, mut cr, mut ci) = (
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
    );
    for (k, gk) in g.iter().enumerate() {
        let xi = -spec.radius + k as f64 * h;
        let v = gk * Complex64::from_polar(1.0, sign * x * xi);
        fr.add(v.re);
        fi.add(v.im);
        if k % 2 == 0 {
            cr.add(v.re);
            ci.add(v.im);
        }
    }
    (
        Complex64::new(fr.value(), fi.value()) * h,
        Complex64::new(cr.value(), ci.value()) * (2.0 * h),
    )
}

/// `(-iξ)^k f_j(ξ)` at the nodes of `spec`, without the scale.
fn factor_integrand(f: &TestFunction, j: usize, k: u32, spec: &QuadratureSpec) -> Vec<Complex64> {
    let phase = Complex64::new(0.0, -1.0).powu(k);
    spec.axis()
        .into_iter()
        .map(|xi| phase * xi.powi(k as i32) * f.factor_derivatives(j, xi, 0)[0])
        .collect()
}

fn check_points(dim: usize, points: &[Vec<f64>]) -> Result<()> {
    match points.iter().find(|p| p.len() != dim) {
        Some(p) => Err(Error::InvalidArgument(format!(
            "point {p:?} has {} coordinates, expected {dim}",
            p.len()
        ))),
        None => Ok(()),
    }
}

fn combine(scale: f64, parts: &[(Complex64, Complex64)], tail: f64) -> TransformValue {
    let fine = parts
        .iter()
        .fold(Complex64::new(scale, 0.0), |acc, p| acc * p.0);
    let coarse = parts
        .iter()
        .fold(Complex64::new(scale, 0.0), |acc, p| acc * p.1);
    TransformValue {
        re: fine.re,
        im: fine.im,
        error_estimate: (fine - coarse).norm() + tail,
    }
}

/// `f̂` at `points`.
pub fn fourier(
    f: &TestFunction,
    spec: &QuadratureSpec,
    points: &[Vec<f64>],
) -> Result<Vec<TransformValue>> {
    fourier_derivative(f, &MultiIndex::zero(f.dim()), spec, points)
}

/// `D^α f̂` at `points`, as the transform of `(-iξ)^α f`.
pub fn fourier_derivative(
    f: &TestFunction,
    alpha: &MultiIndex,
    spec: &QuadratureSpec,
    points: &[Vec<f64>],
) -> Result<Vec<TransformValue>> {
    let n = f.dim();
    if alpha.dim() != n {
        return Err(Error::InvalidArgument(
            "multi-index and test function dimensions differ".into(),
        ));
    }
    check_points(n, points)?;
    spec.check_tail()?;
    let tail = Envelope::function(f, alpha.modulus()).tail(spec.radius);
    if tail >= TAIL_TOLERANCE {
        return Err(Error::TailTooLarge {
            bound: tail,
            tolerance: TAIL_TOLERANCE,
        });
    }
    let integrands: Vec<_> = (0..n)
        .map(|j| factor_integrand(f, j, alpha.components()[j], spec))
        .collect();
    Ok(points
        .par_iter()
        .map(|x| {
            let parts: Vec<_> = (0..n)
                .map(|j| axis_sum(&integrands[j], spec, x[j], -1.0))
                .collect();
            combine(f.scale(), &parts, tail)
        })
        .collect())
}

/// `D^k f̂_j` at the nodes of `axis` for `k ≤ order`, without the scale;
/// indexed `[node][k]`.
pub(crate) fn factor_transform_table(
    f: &TestFunction,
    j: usize,
    order: u32,
    spec: &QuadratureSpec,
    axis: &[f64],
) -> Vec<Vec<TransformValue>> {
    let integrands: Vec<_> = (0..=order)
        .map(|k| factor_integrand(f, j, k, spec))
        .collect();
    axis.par_iter()
        .map(|&x| {
            integrands
                .iter()
                .map(|g| combine(1.0, &[axis_sum(g, spec, x, -1.0)], 0.0))
                .collect()
        })
        .collect()
}

/// `D^α f̂(x)` from the closed forms
/// `F[tⁱe^{-at²}] = (i∂)ⁱ √(π/a) e^{-x²/(4a)}`.
pub fn closed_form_transform(f: &TestFunction, alpha: &MultiIndex, x: &[f64]) -> Complex64 {
    f.factors().iter().zip(x).zip(alpha.components()).fold(
        Complex64::new(f.scale(), 0.0),
        |acc, ((fac, &xj), &k)| {
            let a = fac.a();
            let s = 1.0 / (2.0 * a.sqrt());
            let p = fac.polynomial();
            let top = p.len() - 1 + k as usize;
            let h = hermite_values(xj * s, top);
            let g = (PI / a).sqrt() * (-xj * xj / (4.0 * a)).exp();
            // ∂^m G = (-s)^m H_m(s x) G
            let dg = |m: usize| (-s).powi(m as i32) * h[m] * g;
            let v = p
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |sum, (i, &ci)| {
                    sum + Complex64::new(0.0, 1.0).powu(i as u32) * ci * dg(i + k as usize)
                });
            acc * v
        },
    )
}

/// Samples of a transform on the tensor grid of `spec`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledTransform {
    pub dim: usize,
    pub spec: QuadratureSpec,
    pub values: Vec<Complex64>,
}

impl SampledTransform {
    pub fn new(dim: usize, spec: QuadratureSpec, values: Vec<Complex64>) -> Result<Self> {
        let expected = spec.nodes.checked_pow(dim as u32).unwrap_or(usize::MAX);
        if values.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{} samples for a {dim}-dimensional grid of {} nodes per axis",
                values.len(),
                spec.nodes
            )));
        }
        Ok(SampledTransform { dim, spec, values })
    }

    pub fn zero(dim: usize, spec: QuadratureSpec) -> Result<Self> {
        let len = spec.nodes.pow(dim as u32);
        Self::new(dim, spec, vec![Complex64::new(0.0, 0.0); len])
    }
}

/// `f̂` on the grid of `grid`, integrating with `forward`.
pub fn fourier_on_grid(
    f: &TestFunction,
    forward: &QuadratureSpec,
    grid: &QuadratureSpec,
) -> Result<SampledTransform> {
    forward.check_tail()?;
    let n = f.dim();
    let axis = grid.axis();
    let per_axis: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            factor_transform_table(f, j, 0, forward, &axis)
                .into_iter()
                .map(|row| row[0].value())
                .collect()
        })
        .collect();
    let len = grid.nodes.pow(n as u32);
    let values = (0..len)
        .map(|flat| {
            let mut rem = flat;
            let mut v = Complex64::new(f.scale(), 0.0);
            for j in (0..n).rev() {
                v *= per_axis[j][rem % grid.nodes];
                rem /= grid.nodes;
            }
            v
        })
        .collect();
    SampledTransform::new(n, grid.clone(), values)
}

/// Contracts the last axis of a row-major tensor against `w`.
fn contract_last(values: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
    values
        .chunks(w.len())
        .map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum())
        .collect()
}

/// `(2π)^{-n} ∫ g(x) e^{i⟨x,ξ⟩} dx` at `points`.
pub fn inverse_fourier(g: &SampledTransform, points: &[Vec<f64>]) -> Result<Vec<TransformValue>> {
    check_points(g.dim, points)?;
    g.spec.check_tail()?;
    let n = g.dim;
    let h = g.spec.step();
    let axis = g.spec.axis();
    let norm = (2.0 * PI).powi(-(n as i32));
    Ok(points
        .par_iter()
        .map(|xi| {
            let mut fine = g.values.clone();
            let mut coarse = g.values.clone();
            for j in (0..n).rev() {
                let w: Vec<Complex64> = axis
                    .iter()
                    .map(|&x| Complex64::from_polar(h, x * xi[j]))
                    .collect();
                let wc: Vec<Complex64> = w
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        if k % 2 == 0 {
                            v * 2.0
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect();
                fine = contract_last(&fine, &w);
                coarse = contract_last(&coarse, &wc);
            }
            let (fv, cv) = (fine[0] * norm, coarse[0] * norm);
            TransformValue {
                re: fv.re,
                im: fv.im,
                error_estimate: (fv - cv).norm() + norm * g.spec.tail_bound,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParsevalCheck {
    /// `∫|f|²`.
    pub energy: f64,
    /// `(2π)^{-n} ∫|f̂|²`.
    pub transform_energy: f64,
    pub difference: f64,
}

/// Both sides of Parseval's identity by the trapezoid rule.
pub fn parseval_check(
    f: &TestFunction,
    forward: &QuadratureSpec,
    grid: &QuadratureSpec,
) -> Result<ParsevalCheck> {
    let n = f.dim();
    let h = forward.step();
    let axis = forward.axis();
    let energy = (0..n).fold(f.scale() * f.scale(), |acc, j| {
        let s: CompensatedSum = axis
            .iter()
            .map(|&t| f.factor_derivatives(j, t, 0)[0].powi(2))
            .collect();
        acc * s.value() * h
    });
    let sampled = fourier_on_grid(f, forward, grid)?;
    let s: CompensatedSum = sampled.values.iter().map(|v| v.norm_sqr()).collect();
    let transform_energy = s.value() * grid.step().powi(n as i32) / (2.0 * PI).powi(n as i32);
    Ok(ParsevalCheck {
        energy,
        transform_energy,
        difference: (energy - transform_energy).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn gaussian_is_self_dual() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let spec = QuadratureSpec::for_function(&f, 0).unwrap();
        let out = fourier(&f, &spec, &pts(&[0.0, 1.0, 2.0])).unwrap();
        for (&x, v) in [0.0f64, 1.0, 2.0].iter().zip(&out) {
            let exact = (2.0 * PI).sqrt() * (-x * x / 2.0).exp();
            assert!(
                (v.re - exact).abs() < 1e-10 && v.im.abs() < 1e-12,
                "{x}: {v:?}"
            );
            assert!(v.error_estimate < 1e-10);
        }
    }

    #[test]
    fn odd_real_function_has_odd_imaginary_transform() {
        let f = TestFunction::hermite_gaussian(1, 0.5, 1).unwrap();
        let spec = QuadratureSpec::for_function(&f, 0).unwrap();
        let out = fourier(&f, &spec, &pts(&[-1.5, 1.5])).unwrap();
        assert!(out[0].re.abs() < 1e-12 && out[1].re.abs() < 1e-12);
        assert!((out[0].im + out[1].im).abs() < 1e-12);
        assert!(out[1].im.abs() > 0.1);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let f = TestFunction::poly_gaussian(vec![1.0, -2.0, 0.5], 0.7, 2).unwrap();
        let spec = QuadratureSpec::for_function(&f, 2).unwrap();
        let x = vec![vec![0.3, -1.2]];
        for alpha in MultiIndex::up_to(2, 2) {
            let q = fourier_derivative(&f, &alpha, &spec, &x).unwrap()[0].value();
            let c = closed_form_transform(&f, &alpha, &x[0]);
            assert!((q - c).norm() < 1e-10, "{alpha}: {q} vs {c}");
        }
    }

    #[test]
    fn short_radius_is_rejected() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let spec = QuadratureSpec::new(3.0, 64, 0.0).unwrap();
        assert!(matches!(
            fourier(&f, &spec, &pts(&[0.0])),
            Err(Error::TailTooLarge { .. })
        ));
        assert!(QuadratureSpec::new(3.0, 63, 0.0).is_err());
    }

    #[test]
    fn round_trip_in_one_dimension() {
        let f = TestFunction::poly_gaussian(vec![1.0, 0.0, 1.0], 0.5, 1).unwrap();
        let fwd = QuadratureSpec::for_function(&f, 0).unwrap();
        let grid = QuadratureSpec::for_transform(&f).unwrap();
        let g = fourier_on_grid(&f, &fwd, &grid).unwrap();
        let xs = [-2.0, -0.5, 0.0, 1.0, 3.0];
        let back = inverse_fourier(&g, &pts(&xs)).unwrap();
        for (x, v) in xs.iter().zip(&back) {
            assert!((v.re - f.eval_real(&[*x])).abs() < 1e-8 && v.im.abs() < 1e-8);
        }
    }

    #[test]
    fn zero_samples_invert_to_zero() {
        let spec = QuadratureSpec::new(5.0, 16, 0.0).unwrap();
        let g = SampledTransform::zero(2, spec).unwrap();
        let v = inverse_fourier(&g, &[vec![0.5, 1.0]]).unwrap();
        assert_eq!(v[0].value(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn parseval_for_gaussian() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let r = parseval_check(
            &f,
            &QuadratureSpec::for_function(&f, 0).unwrap(),
            &QuadratureSpec::for_transform(&f).unwrap(),
        )
        .unwrap();
        assert!((r.energy - PI.sqrt()).abs() < 1e-12);
        assert!(r.difference < 1e-8);
    }
}
