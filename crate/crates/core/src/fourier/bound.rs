//! The bound `‖f̂‖_{m,ψ*_ν} ≤ s_n p_{ν,n+m+1}(f)` and the pointwise estimates
//! it is assembled from.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::check::{worst, InequalityRecord};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::numerics::sum::{compensated_sum, CompensatedSum};
use crate::seminorm::norms::g_seminorm_from_tables;
use crate::seminorm::{
    p_seminorm, psi_star_table, ChainSettings, SeminormReport, TestFunction, MARGIN_TOLERANCE,
};
use crate::weights::{Weight, WeightFamily};

use super::quadrature::{
    axis_sum, factor_transform_table, fourier_derivative, Envelope, QuadratureSpec, TARGET_TAIL,
};
use super::surface::{surface_constant, SurfaceConstant};

/// Relative agreement required between the shifted and real-line integrals.
const SHIFT_TOLERANCE: f64 = 1e-9;
/// Largest tensor grid used for the absolute-value integral.
const MAX_TENSOR_NODES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierBoundReport {
    pub function: String,
    pub family: String,
    pub nu: u32,
    pub m: u32,
    pub surface: SurfaceConstant,
    pub quadrature: QuadratureSpec,
    /// `‖f̂‖_{m,ψ*_ν}` with `f̂` and its derivatives from quadrature.
    pub transform_norm: SeminormReport,
    /// `p_{ν,n+m+1}(f)`.
    pub p_shift: SeminormReport,
    /// `s_n p_{ν,n+m+1}(f)`.
    pub bound: f64,
    pub margin: f64,
    /// Largest quadrature error estimate over the transform tables.
    pub transform_error: f64,
    pub passed: bool,
}

fn check_dims(f: &TestFunction, family: &WeightFamily) -> Result<()> {
    if f.dim() != family.dim() {
        return Err(Error::InvalidArgument(
            "test function and family dimensions differ".into(),
        ));
    }
    Ok(())
}

/// Evaluates both sides of `‖f̂‖_{m,ψ*_ν} ≤ s_n p_{ν,n+m+1}(f)`.
pub fn verify_theorem3_bound(
    f: &TestFunction,
    family: &WeightFamily,
    nu: u32,
    m: u32,
    settings: &ChainSettings,
) -> Result<FourierBoundReport> {
    check_dims(f, family)?;
    let n = f.dim();
    let surface = surface_constant(n)?;
    let quadrature = QuadratureSpec::for_function(f, m)?;
    let axis = settings.real.axis();
    let mut transform_error: f64 = 0.0;
    let mut ln_d = Vec::with_capacity(n);
    for j in 0..n {
        let table = factor_transform_table(f, j, m, &quadrature, &axis);
        let rows: Vec<Vec<f64>> = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        transform_error = transform_error.max(v.error_estimate);
                        v.value().norm().ln()
                    })
                    .collect()
            })
            .collect();
        ln_d.push(rows);
    }
    let axes = vec![axis; n];
    let psi = psi_star_table(family, nu, settings.max_order)?;
    let transform_norm = g_seminorm_from_tables(
        f.scale(),
        &axes,
        ln_d,
        &psi,
        m,
        &settings.real,
        settings.max_order,
    )?;
    let p_shift = p_seminorm(
        f,
        family.member(nu)?.as_ref(),
        n as u32 + m + 1,
        &settings.complex,
    )?;
    let bound = surface.s_n * p_shift.value;
    let margin = bound - transform_norm.value;
    Ok(FourierBoundReport {
        function: f.name(),
        family: family.name().to_string(),
        nu,
        m,
        surface,
        quadrature,
        transform_norm,
        p_shift,
        bound,
        margin,
        transform_error: transform_error * f.scale().abs(),
        passed: margin >= -MARGIN_TOLERANCE,
    })
}

/// Sampling of the pointwise checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockSettings {
    pub samples: usize,
    pub seed: u64,
    /// `x` is drawn from `[-x_radius, x_radius]ⁿ`.
    pub x_radius: f64,
    /// `η` is drawn from `[-eta_radius, eta_radius]ⁿ`.
    pub eta_radius: f64,
    pub max_alpha: u32,
    pub max_beta: u32,
    /// Nodes of the geometric `t` grid on `[1e-3, 1e2]`.
    pub t_nodes: usize,
}

impl Default for BlockSettings {
    fn default() -> Self {
        BlockSettings {
            samples: 24,
            seed: 42,
            x_radius: 3.0,
            eta_radius: 1.0,
            max_alpha: 2,
            max_beta: 3,
            t_nodes: 61,
        }
    }
}

/// `p_{ν,n+k+1}(f)` for `k ≤ max_alpha`.
fn p_ladder(
    f: &TestFunction,
    family: &WeightFamily,
    nu: u32,
    max_alpha: u32,
    settings: &ChainSettings,
) -> Result<Vec<f64>> {
    let phi = family.member(nu)?;
    (0..=max_alpha)
        .map(|k| Ok(p_seminorm(f, phi.as_ref(), f.dim() as u32 + k + 1, &settings.complex)?.value))
        .collect()
}

fn random_alpha(rng: &mut ChaCha8Rng, n: usize, max: u32) -> MultiIndex {
    let all = MultiIndex::up_to(n, max);
    all[rng.random_range(0..all.len())].clone()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourSample {
    pub x: Vec<f64>,
    pub eta: Vec<f64>,
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    /// `|∫ f(ζ)(-iζ)^α e^{-i⟨x,ζ⟩} dξ|` along `ζ = ξ + iη`.
    pub shifted: f64,
    /// `|D^α f̂(x)|` along the real line.
    pub real_line: f64,
    pub discrepancy: f64,
    /// `e^{⟨x,η⟩} ∫ |f(ζ)| ‖ζ‖^{|α|} dξ`.
    pub absolute: f64,
    /// `|x^β|`-weighted steps: shifted ≤ absolute, absolute ≤ bound.
    pub steps: Vec<InequalityRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourShiftReport {
    pub function: String,
    pub family: String,
    pub nu: u32,
    pub samples: Vec<ContourSample>,
    pub worst_margin: f64,
    pub max_relative_discrepancy: f64,
    pub passed: bool,
}

/// `∫ f_j(ξ+iη)(-i(ξ+iη))^k e^{-ix(ξ+iη)} dξ` without the scale.
fn shifted_factor(
    f: &TestFunction,
    j: usize,
    k: u32,
    x: f64,
    eta: f64,
    spec: &QuadratureSpec,
) -> Complex64 {
    let minus_i = Complex64::new(0.0, -1.0);
    let values: Vec<Complex64> = spec
        .axis()
        .into_iter()
        .map(|xi| {
            let z = Complex64::new(xi, eta);
            f.factor_eval(j, z) * (minus_i * z).powu(k)
        })
        .collect();
    axis_sum(&values, spec, x, -1.0).0 * (x * eta).exp()
}

/// `∫ |f(ξ+iη)| ‖ξ+iη‖^k dξ` on a tensor grid.
fn absolute_integral(f: &TestFunction, k: u32, eta: &[f64], radius: f64) -> f64 {
    let n = f.dim();
    let mut nodes = super::quadrature::default_nodes(n);
    while nodes.pow(n as u32) > MAX_TENSOR_NODES {
        nodes /= 2;
    }
    let spec = QuadratureSpec {
        radius,
        nodes,
        tail_bound: 0.0,
    };
    let axis = spec.axis();
    let per_axis: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            axis.iter()
                .map(|&xi| f.factor_eval(j, Complex64::new(xi, eta[j])).norm())
                .collect()
        })
        .collect();
    let eta_sq: f64 = eta.iter().map(|e| e * e).sum();
    let h = spec.step();
    let len = nodes.pow(n as u32);
    let blocks: Vec<f64> = (0..len.div_ceil(nodes))
        .into_par_iter()
        .map(|b| {
            let mut acc = CompensatedSum::new();
            for flat in b * nodes..((b + 1) * nodes).min(len) {
                let mut rem = flat;
                let mut v = 1.0;
                let mut norm_sq = eta_sq;
                for j in (0..n).rev() {
                    let i = rem % nodes;
                    rem /= nodes;
                    v *= per_axis[j][i];
                    norm_sq += axis[i] * axis[i];
                }
                acc.add(v * norm_sq.powf(k as f64 / 2.0));
            }
            acc.value()
        })
        .collect();
    let total = compensated_sum(blocks);
    f.scale().abs() * total * h.powi(n as i32)
}

/// At sampled `(x, η, α, β)`, evaluates `D^α f̂(x)` along the shifted line
/// `ξ + iη` and checks
/// `|x^β D^α f̂(x)| ≤ e^{⟨x,η⟩}|x^β| ∫|f(ζ)|‖ζ‖^{|α|}dξ ≤ s_n p_{ν,n+|α|+1}(f) e^{φ_ν(η)} e^{⟨x,η⟩} |x^β|`.
pub fn verify_contour_shift(
    f: &TestFunction,
    family: &WeightFamily,
    nu: u32,
    settings: &ChainSettings,
    block: &BlockSettings,
) -> Result<ContourShiftReport> {
    check_dims(f, family)?;
    let n = f.dim();
    let s_n = surface_constant(n)?.s_n;
    let phi = family.member(nu)?;
    let ps = p_ladder(f, family, nu, block.max_alpha, settings)?;
    let real_spec = QuadratureSpec::for_function(f, block.max_alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(block.seed);
    let mut samples = Vec::with_capacity(block.samples);
    for _ in 0..block.samples {
        let x: Vec<f64> = (0..n)
            .map(|_| rng.random_range(-block.x_radius..=block.x_radius))
            .collect();
        let eta: Vec<f64> = (0..n)
            .map(|_| rng.random_range(-block.eta_radius..=block.eta_radius))
            .collect();
        let alpha = random_alpha(&mut rng, n, block.max_alpha);
        let beta = random_alpha(&mut rng, n, block.max_beta);
        let (radius, _) = Envelope::shifted(f, &alpha, &eta).radius_for(TARGET_TAIL)?;
        let spec = QuadratureSpec::new(radius, real_spec.nodes, 0.0)?;
        let shifted_value = (0..n).fold(Complex64::new(f.scale(), 0.0), |acc, j| {
            acc * shifted_factor(f, j, alpha.components()[j], x[j], eta[j], &spec)
        });
        let real_value =
            fourier_derivative(f, &alpha, &real_spec, std::slice::from_ref(&x))?[0].value();
        let x_eta: f64 = x.iter().zip(&eta).map(|(a, b)| a * b).sum();
        let absolute = x_eta.exp() * absolute_integral(f, alpha.modulus(), &eta, radius);
        let weight = beta.pow(&x).abs();
        let bound = s_n * ps[alpha.modulus() as usize] * (phi.eval(&eta) + x_eta).exp();
        let point: Vec<f64> = x.iter().chain(&eta).copied().collect();
        let steps = vec![
            InequalityRecord::new(
                "shifted integral",
                point.clone(),
                weight * shifted_value.norm(),
                weight * absolute,
            ),
            InequalityRecord::new(
                "absolute integral",
                point,
                weight * absolute,
                weight * bound,
            ),
        ];
        samples.push(ContourSample {
            x,
            eta,
            alpha,
            beta,
            shifted: shifted_value.norm(),
            real_line: real_value.norm(),
            discrepancy: (shifted_value - real_value).norm(),
            absolute,
            steps,
        });
    }
    let records: Vec<InequalityRecord> = samples.iter().flat_map(|s| s.steps.clone()).collect();
    let worst_margin = worst(&records).map_or(f64::INFINITY, |r| r.margin);
    let max_relative_discrepancy = samples
        .iter()
        .map(|s| s.discrepancy / (1.0 + s.absolute))
        .fold(0.0, f64::max);
    Ok(ContourShiftReport {
        function: f.name(),
        family: family.name().to_string(),
        nu,
        samples,
        worst_margin,
        max_relative_discrepancy,
        passed: worst_margin >= -MARGIN_TOLERANCE && max_relative_discrepancy <= SHIFT_TOLERANCE,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreSupremumRecord {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    /// Best `t` on the grid; zero on coordinates with `βⱼ = 0`.
    pub t: Vec<f64>,
    pub record: InequalityRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreSupremumReport {
    pub function: String,
    pub family: String,
    pub nu: u32,
    pub records: Vec<PreSupremumRecord>,
    pub worst_margin: f64,
    pub passed: bool,
}

/// `min_t s_n p e^{φ_ν(t)} Π_{βⱼ≠0} |xⱼ|^{βⱼ} e^{-tⱼ|xⱼ|}` over the grid, in logs.
fn best_t(
    ln_base: f64,
    phi: &dyn Weight,
    x: &[f64],
    beta: &MultiIndex,
    grid: &[f64],
) -> (f64, Vec<f64>) {
    let n = x.len();
    let active: Vec<usize> = (0..n).filter(|&j| beta.components()[j] > 0).collect();
    let combos = grid.len().pow(active.len() as u32);
    let mut best = (f64::INFINITY, vec![0.0; n]);
    let mut t = vec![0.0; n];
    for c in 0..combos {
        let mut rem = c;
        for &j in &active {
            t[j] = grid[rem % grid.len()];
            rem /= grid.len();
        }
        let mut v = ln_base + phi.eval(&t);
        for &j in &active {
            let xj = x[j].abs();
            v += beta.components()[j] as f64 * xj.ln() - t[j] * xj;
        }
        if v < best.0 {
            best = (v, t.clone());
        }
    }
    (best.0.exp(), best.1)
}

/// Checks `|x^β D^α f̂(x)| ≤ s_n p_{ν,n+|α|+1}(f) e^{φ_ν(t)} Π_{βⱼ≠0} |xⱼ|^{βⱼ} e^{-tⱼ|xⱼ|}`
/// at the best `t` of a geometric grid, for every `β` with `1 ≤ |β| ≤ max_beta`.
pub fn verify_pre_supremum(
    f: &TestFunction,
    family: &WeightFamily,
    nu: u32,
    settings: &ChainSettings,
    block: &BlockSettings,
) -> Result<PreSupremumReport> {
    check_dims(f, family)?;
    let n = f.dim();
    let s_n = surface_constant(n)?.s_n;
    let phi = family.member(nu)?;
    let ps = p_ladder(f, family, nu, block.max_alpha, settings)?;
    let spec = QuadratureSpec::for_function(f, block.max_alpha)?;
    let steps = block.t_nodes.max(2) - 1;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| 1e-3 * 1e5f64.powf(i as f64 / steps as f64))
        .collect();
    let betas: Vec<MultiIndex> = (1..=block.max_beta)
        .flat_map(|k| MultiIndex::shell(n, k))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(block.seed);
    let mut records = Vec::new();
    for _ in 0..block.samples {
        let x: Vec<f64> = (0..n)
            .map(|_| rng.random_range(-block.x_radius..=block.x_radius))
            .collect();
        let alpha = random_alpha(&mut rng, n, block.max_alpha);
        let d = fourier_derivative(f, &alpha, &spec, std::slice::from_ref(&x))?[0]
            .value()
            .norm();
        let ln_base = (s_n * ps[alpha.modulus() as usize]).ln();
        for beta in &betas {
            let lhs = beta.pow(&x).abs() * d;
            let (rhs, t) = best_t(ln_base, phi.as_ref(), &x, beta, &grid);
            records.push(PreSupremumRecord {
                alpha: alpha.clone(),
                beta: beta.clone(),
                t,
                record: InequalityRecord::new("pre-supremum", x.clone(), lhs, rhs),
            });
        }
    }
    let worst_margin = records
        .iter()
        .map(|r| r.record.margin)
        .fold(f64::INFINITY, f64::min);
    Ok(PreSupremumReport {
        function: f.name(),
        family: family.name().to_string(),
        nu,
        records,
        worst_margin,
        passed: worst_margin >= -MARGIN_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{make_radial_family, Profile};

    fn square_family(dim: usize) -> WeightFamily {
        make_radial_family(Profile::Square, 2.0, dim).unwrap()
    }

    #[test]
    fn gaussian_bound_in_one_dimension() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let fam = square_family(1);
        let settings = ChainSettings::default_for(1);
        for m in 0..=1 {
            let r = verify_theorem3_bound(&f, &fam, 1, m, &settings).unwrap();
            assert!(r.passed, "m={m}: {} vs {}", r.transform_norm.value, r.bound);
            assert_eq!(r.surface.s_n, 2.0);
        }
    }

    #[test]
    fn zero_function_gives_zero_margin() {
        let f = TestFunction::zero(1).unwrap();
        let r = verify_theorem3_bound(&f, &square_family(1), 1, 0, &ChainSettings::default_for(1))
            .unwrap();
        assert_eq!(r.transform_norm.value, 0.0);
        assert_eq!(r.bound, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn contour_shift_agrees_with_real_line() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let block = BlockSettings {
            samples: 8,
            ..BlockSettings::default()
        };
        let r = verify_contour_shift(
            &f,
            &square_family(1),
            1,
            &ChainSettings::default_for(1),
            &block,
        )
        .unwrap();
        assert!(
            r.passed,
            "{} {}",
            r.worst_margin, r.max_relative_discrepancy
        );
    }

    #[test]
    fn pre_supremum_holds_for_hermite_gaussian() {
        let f = TestFunction::hermite_gaussian(2, 0.5, 1).unwrap();
        let block = BlockSettings {
            samples: 8,
            ..BlockSettings::default()
        };
        let r = verify_pre_supremum(
            &f,
            &square_family(1),
            1,
            &ChainSettings::default_for(1),
            &block,
        )
        .unwrap();
        assert_eq!(r.records.len(), 8 * 3);
        assert!(r.passed, "{}", r.worst_margin);
    }
}
