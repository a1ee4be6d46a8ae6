//! End-to-end checks of the embedding inequalities between the seminorm
//! families, with every constant estimated numerically.

use serde::Serialize;

use std::sync::Arc;

use rayon::prelude::*;

use crate::check::InequalityRecord;
use crate::conjugate::{
    conjugate_nd, discrete_log_conjugate, lattice_conjugate_table, AdaptiveConjugate, LatticeTable,
};
use crate::error::{Error, Result};
use crate::grid::{uniform_axis, GridFunction};
use crate::multi_index::MultiIndex;
use crate::numerics::optimize::{maximize, Domain, SearchConfig};
use crate::weights::{
    Condition, ConstantEstimate, ProbeGrid, Weight, WeightFamily, WeightFunction,
};

use super::norms::{
    g_seminorm, p_seminorm, q_seminorm, rho_seminorm, ComplexGrid, RealGrid, SeminormReport,
};
use super::TestFunction;

/// Tolerance on the margins of the verified inequalities.
pub const MARGIN_TOLERANCE: f64 = 1e-6;

/// Grids and truncation orders shared by the chain checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainSettings {
    pub real: RealGrid,
    pub complex: ComplexGrid,
    pub probe: ProbeGrid,
    /// Largest `|α|` for `ρ` and `|β|` for `‖·‖`.
    pub max_order: u32,
    /// Nodes per axis of the primal grid sampled for `φ*`.
    pub primal_nodes: usize,
}

impl ChainSettings {
    pub fn default_for(dim: usize) -> Self {
        let (max_order, primal_nodes) = match dim {
            1 => (40, 4001),
            2 => (24, 401),
            _ => (12, 61),
        };
        ChainSettings {
            real: RealGrid::default_for(dim),
            complex: ComplexGrid::default_for(dim),
            probe: ProbeGrid::default_for(dim),
            max_order,
            primal_nodes,
        }
    }
}

/// `ψ*_ν = (φ_ν[e])*` on `|α| ≤ bound`.
pub fn psi_star_table(family: &WeightFamily, nu: u32, bound: u32) -> Result<LatticeTable> {
    lattice_conjugate_table(family.member(nu)?.as_ref(), bound, &SearchConfig::default())
}

/// `φ*` on the nodes of `dual`, computed by the discrete Legendre transform
/// of `φ` sampled on a box that contains every maximizer.
pub fn conjugate_on_grid<W: Weight + ?Sized>(
    phi: &W,
    dual: &RealGrid,
    primal_nodes: usize,
) -> Result<GridFunction> {
    let n = phi.dim();
    let origin = vec![0.0; n];
    let base = phi.eval(&origin);
    let reach = n as f64 * dual.radius;
    let mut r: f64 = 1.0;
    loop {
        let grows = (0..n).all(|j| {
            let mut e = origin.clone();
            e[j] = r;
            phi.eval(&e) - base > reach * r
        });
        if grows {
            break;
        }
        r *= 2.0;
        if r > 1e6 {
            return Err(Error::Precondition(format!(
                "weight does not outgrow a linear function of slope {reach}"
            )));
        }
    }
    let axis = uniform_axis(-r, r, primal_nodes);
    let sampled = GridFunction::from_fn(vec![axis; n], |y| phi.eval(y))?;
    conjugate_nd(&sampled, &vec![dual.axis(); n])
}

/// Partial sums of `B_ν = Σ_α e^{ψ*_{ν+1}(α) - ψ*_ν(α)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub bound: u32,
    /// Contribution of the outermost shell.
    pub last_shell: f64,
}

pub fn b_series(psi_nu: &LatticeTable, psi_next: &LatticeTable) -> SeriesSum {
    let bound = psi_nu.bound().min(psi_next.bound());
    let mut shells = vec![0.0; bound as usize + 1];
    for alpha in MultiIndex::up_to(psi_nu.dim(), bound) {
        let (a, b) = (psi_nu.get(&alpha).unwrap(), psi_next.get(&alpha).unwrap());
        shells[alpha.modulus() as usize] += (b - a).exp();
    }
    SeriesSum {
        value: shells.iter().sum(),
        bound,
        last_shell: shells[bound as usize],
    }
}

/// `C₁(k, A) = sup_{s ∈ (0,∞)ⁿ} φ_k(s) + A Σ ln sⱼ - φ_{k+1}(s)`, the
/// constant of `ψ_k(x) + A Σ xⱼ ≤ ψ_{k+1}(x) + C₁`.
pub fn log_shift_constant(family: &WeightFamily, k: u32, a: f64) -> Result<f64> {
    let (lo, hi) = (family.member(k)?, family.member(k + 1)?);
    let n = family.dim();
    let objective = |s: &[f64]| {
        let logs: f64 = if a == 0.0 {
            0.0
        } else {
            s.iter().map(|v| a * v.ln()).sum()
        };
        lo.eval(s) + logs - hi.eval(s)
    };
    Ok(maximize(
        objective,
        &vec![Domain::HalfLine; n],
        &SearchConfig::default(),
    )?
    .value)
}

/// `ξ ↦ (φ[e])*(ξ)` as a weight on `ℝⁿ`, `+∞` off `[0,∞)ⁿ`.
struct LogConjugate(Arc<WeightFunction>);

impl Weight for LogConjugate {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, xi: &[f64]) -> f64 {
        if xi.iter().any(|&v| v < 0.0) {
            return f64::INFINITY;
        }
        discrete_log_conjugate(self.0.as_ref(), xi, &SearchConfig::default())
            .map_or(f64::INFINITY, |v| v.to_f64())
    }
}

/// `(ψ_k*)*(x) + A Σ xⱼ ≤ (ψ_{k+1}*)*(x) + C₁(k, A)` at each point of
/// `[0,∞)ⁿ`, with both biconjugates computed by conjugating the numerical
/// `ψ*` once more.
pub fn log_shift_suite(
    family: &WeightFamily,
    k: u32,
    a: f64,
    points: &[Vec<f64>],
) -> Result<Vec<InequalityRecord>> {
    let c1 = log_shift_constant(family, k, a)?;
    let lo = AdaptiveConjugate::new(LogConjugate(family.member(k)?));
    let hi = AdaptiveConjugate::new(LogConjugate(family.member(k + 1)?));
    points
        .par_iter()
        .map(|x| {
            let lhs = lo.conjugate_at(x)?.0 + a * x.iter().sum::<f64>();
            let rhs = hi.conjugate_at(x)?.0 + c1;
            Ok(InequalityRecord::new(
                format!("log shift A={a}"),
                x.clone(),
                lhs,
                rhs,
            ))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub function: String,
    pub family: String,
    pub m: u32,
    pub nu: u32,
    /// `C_{ν,m}`: the `i₀` constant with `A = m`.
    pub c_nu_m: ConstantEstimate,
    pub p_nu: SeminormReport,
    pub rho_next: SeminormReport,
    /// `e^{C_{ν,m}} p_{ν,m}(f) - ρ_{m,ν+1}(f)`.
    pub margin_rho: f64,
    pub rho_nu: SeminormReport,
    pub b_nu: SeriesSum,
    /// `C₁(ν+1, m)`.
    pub c1: f64,
    /// Unit-shift constant `K_{ν+2}`.
    pub k_shift: ConstantEstimate,
    /// `K_{ν,m} = B_ν e^{C₁(ν+1,m) + K_{ν+2}}`.
    pub k_nu_m: f64,
    /// `p_{ν+3,m}(f)`, the grid sup of `(1+‖z‖)^m |f(z)| e^{-φ_{ν+3}(Im z)}`.
    pub p_shift: SeminormReport,
    /// `K_{ν,m} ρ_{m,ν}(f) - p_{ν+3,m}(f)`.
    pub margin_growth: f64,
    pub passed: bool,
}

/// Checks `ρ_{m,ν+1}(f) ≤ e^{C_{ν,m}} p_{ν,m}(f)` and
/// `p_{ν+3,m}(f) ≤ K_{ν,m} ρ_{m,ν}(f)`.
pub fn verify_embedding_chain(
    f: &TestFunction,
    family: &WeightFamily,
    m: u32,
    nu: u32,
    settings: &ChainSettings,
) -> Result<EmbeddingReport> {
    if f.dim() != family.dim() {
        return Err(Error::InvalidArgument(
            "test function and family dimensions differ".into(),
        ));
    }
    let order = settings.max_order;
    let c_nu_m = family.estimate(Condition::I0 { a: m as f64 }, nu, &settings.probe)?;
    let p_nu = p_seminorm(f, family.member(nu)?.as_ref(), m, &settings.complex)?;
    let psi_nu = psi_star_table(family, nu, order)?;
    let psi_next = psi_star_table(family, nu + 1, order)?;
    let rho_next = rho_seminorm(f, &psi_next, m, &settings.real, order)?;
    let margin_rho = c_nu_m.value.exp() * p_nu.value - rho_next.value;

    let rho_nu = rho_seminorm(f, &psi_nu, m, &settings.real, order)?;
    let b_nu = b_series(&psi_nu, &psi_next);
    let c1 = log_shift_constant(family, nu + 1, m as f64)?;
    let k_shift = family.estimate(Condition::I2, nu + 2, &settings.probe)?;
    let k_nu_m = b_nu.value * (c1 + k_shift.value).exp();
    let p_shift = p_seminorm(f, family.member(nu + 3)?.as_ref(), m, &settings.complex)?;
    let margin_growth = k_nu_m * rho_nu.value - p_shift.value;
    let passed = margin_rho >= -MARGIN_TOLERANCE && margin_growth >= -MARGIN_TOLERANCE;
    Ok(EmbeddingReport {
        function: f.name(),
        family: family.name().to_string(),
        m,
        nu,
        c_nu_m,
        p_nu,
        rho_next,
        margin_rho,
        rho_nu,
        b_nu,
        c1,
        k_shift,
        k_nu_m,
        p_shift,
        margin_growth,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub function: String,
    pub family: String,
    pub m: u32,
    pub nu: u32,
    /// `‖f‖_{m,ψ*_ν}`.
    pub g_nu: SeminormReport,
    pub q_nu: SeminormReport,
    /// `q_{m,ν}(f) - ‖f‖_{m,ψ*_ν}`.
    pub margin: f64,
    pub q_shift: SeminormReport,
    /// Observed `q_{m,ν+4}(f) / ‖f‖_{m,ψ*_ν}`; `None` for the zero function.
    pub ratio: Option<f64>,
    pub passed: bool,
}

/// Checks `‖f‖_{m,ψ*_ν} ≤ q_{m,ν}(f)` and reports the ratio
/// `q_{m,ν+4}(f) / ‖f‖_{m,ψ*_ν}` that bounds the reverse embedding.
pub fn verify_theorem4_equivalence(
    f: &TestFunction,
    family: &WeightFamily,
    m: u32,
    nu: u32,
    settings: &ChainSettings,
) -> Result<EquivalenceReport> {
    if f.dim() != family.dim() {
        return Err(Error::InvalidArgument(
            "test function and family dimensions differ".into(),
        ));
    }
    let psi_nu = psi_star_table(family, nu, settings.max_order)?;
    let g_nu = g_seminorm(f, &psi_nu, m, &settings.real, settings.max_order)?;
    let star = conjugate_on_grid(
        family.member(nu)?.as_ref(),
        &settings.real,
        settings.primal_nodes,
    )?;
    let q_nu = q_seminorm(f, &star, m)?;
    let star4 = conjugate_on_grid(
        family.member(nu + 4)?.as_ref(),
        &settings.real,
        settings.primal_nodes,
    )?;
    let q_shift = q_seminorm(f, &star4, m)?;
    let margin = q_nu.value - g_nu.value;
    let ratio = (g_nu.value > 0.0).then(|| q_shift.value / g_nu.value);
    Ok(EquivalenceReport {
        function: f.name(),
        family: family.name().to_string(),
        m,
        nu,
        g_nu,
        q_nu,
        margin,
        q_shift,
        ratio,
        passed: margin >= -MARGIN_TOLERANCE,
    })
}

/// Decay of `M_k = max_x max_{|α|=k} |D^α f(x)| / α!` against `ε^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeDecay {
    pub epsilon: f64,
    pub shell_maxima: Vec<f64>,
    /// `c_ε = max_k M_k ε^{-k}`.
    pub c_eps: f64,
    /// `M_k ε^{-k}` decreases over the last three shells.
    pub geometric_tail: bool,
}

pub fn derivative_decay(
    f: &TestFunction,
    grid: &RealGrid,
    max_order: u32,
    epsilon: f64,
) -> DerivativeDecay {
    let n = f.dim();
    let axis = grid.axis();
    let k = max_order as usize;
    // Per axis and order, max_t |D^k f_j(t)| / k!.
    let per_axis: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut best = vec![0.0f64; k + 1];
            for &t in &axis {
                for (q, d) in f.factor_derivatives(j, t, k).into_iter().enumerate() {
                    best[q] = best[q].max(d.abs());
                }
            }
            best.iter()
                .enumerate()
                .map(|(q, b)| b / MultiIndex::new(vec![q as u32]).factorial())
                .collect()
        })
        .collect();
    let mut shell_maxima = vec![0.0f64; k + 1];
    for alpha in MultiIndex::up_to(n, max_order) {
        let v = alpha
            .components()
            .iter()
            .enumerate()
            .fold(f.scale().abs(), |acc, (j, &a)| {
                acc * per_axis[j][a as usize]
            });
        let s = alpha.modulus() as usize;
        shell_maxima[s] = shell_maxima[s].max(v);
    }
    let scaled: Vec<f64> = shell_maxima
        .iter()
        .enumerate()
        .map(|(q, v)| v / epsilon.powi(q as i32))
        .collect();
    let c_eps = scaled.iter().copied().fold(0.0, f64::max);
    let geometric_tail = k >= 3 && scaled[k - 3..].windows(2).all(|w| w[1] <= w[0]);
    DerivativeDecay {
        epsilon,
        shell_maxima,
        c_eps,
        geometric_tail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{make_radial_family, Profile};

    #[test]
    fn square_family_series_constant_is_two() {
        let fam = make_radial_family(Profile::Square, 2.0, 1).unwrap();
        let b = b_series(
            &psi_star_table(&fam, 1, 40).unwrap(),
            &psi_star_table(&fam, 2, 40).unwrap(),
        );
        assert!((b.value - 2.0).abs() < 1e-9, "{}", b.value);
    }

    #[test]
    fn conjugate_of_square_weight_on_grid() {
        let fam = make_radial_family(Profile::Square, 2.0, 1).unwrap();
        let star = conjugate_on_grid(
            fam.member(1).unwrap().as_ref(),
            &RealGrid {
                radius: 10.0,
                nodes: 201,
            },
            4001,
        )
        .unwrap();
        for (x, v) in star.iter() {
            let exact = x[0] * x[0] / 16.0;
            assert!(v.to_f64() <= exact + 1e-12 && v.to_f64() > exact - 1e-4);
        }
    }

    #[test]
    fn zero_function_chains_hold_trivially() {
        let fam = make_radial_family(Profile::Square, 2.0, 1).unwrap();
        let z = TestFunction::zero(1).unwrap();
        let mut s = ChainSettings::default_for(1);
        s.max_order = 12;
        let r = verify_embedding_chain(&z, &fam, 0, 1, &s).unwrap();
        assert!(r.passed && r.margin_rho == 0.0);
        let e = verify_theorem4_equivalence(&z, &fam, 0, 1, &s).unwrap();
        assert!(e.passed && e.ratio.is_none());
    }

    #[test]
    fn gaussian_derivatives_decay_geometrically() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let d = derivative_decay(&f, &RealGrid::default_for(1), 30, 0.5);
        assert!(d.geometric_tail && d.c_eps.is_finite());
    }

    #[test]
    fn log_shift_holds_through_biconjugates() {
        let fam = make_radial_family(Profile::Square, 2.0, 1).unwrap();
        let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![0.5 * i as f64]).collect();
        let recs = log_shift_suite(&fam, 1, 1.0, &pts).unwrap();
        for r in &recs {
            assert!(r.holds(1e-8), "{r:?}");
        }
        // (ψ*)* recovers ψ(x) = φ(eˣ) = 4e^{2x} for the convex ψ of ν = 1.
        let lo = AdaptiveConjugate::new(LogConjugate(fam.member(1).unwrap()));
        let v = lo.conjugate_at(&[1.0]).unwrap().0;
        assert!((v - 4.0 * 2f64.exp()).abs() < 1e-6, "{v}");
    }
}
