//! Inequality suites relating conjugates of log-substituted weights.

use rayon::prelude::*;

use crate::check::InequalityRecord;
use crate::error::Result;
use crate::multi_index::MultiIndex;
use crate::numerics::optimize::{maximize, Domain, SearchConfig};
use crate::numerics::sum::compensated_sum;
use crate::weights::Weight;

use super::{discrete_log_conjugate, duality_sum, log_entropy, AdaptiveConjugate, LatticeTable};

/// `A = sup_{s ∈ [0,∞)ⁿ} (M Σ sⱼ - g(s))`, the smallest constant with
/// `g[e](t) ≥ M Σ e^{tⱼ} - A`.
pub fn exponential_minorant_constant<W: Weight + ?Sized>(
    g: &W,
    m: f64,
    cfg: &SearchConfig,
) -> Result<f64> {
    let domains = vec![Domain::HalfLine; g.dim()];
    let best = maximize(
        |s| m * compensated_sum(s.iter().copied()) - g.eval(s),
        &domains,
        cfg,
    )?;
    Ok(best.value)
}

/// `(g[e])*(x) ≤ Σ_{xⱼ≠0}(xⱼ ln(xⱼ/M) - xⱼ) + A` for each `M` and lattice point.
pub fn lemma1_suite<W: Weight + ?Sized>(
    g: &W,
    table: &LatticeTable,
    ms: &[f64],
    cfg: &SearchConfig,
) -> Result<Vec<InequalityRecord>> {
    let mut out = Vec::new();
    for &m in ms {
        let a = exponential_minorant_constant(g, m, cfg)?;
        for (alpha, lhs) in table.iter() {
            let x = alpha.as_f64();
            let bound = compensated_sum(
                x.iter()
                    .filter(|&&v| v != 0.0)
                    .map(|&v| v * (v / m).ln() - v),
            );
            out.push(InequalityRecord::new(
                format!("exponential bound M={m}"),
                x,
                lhs,
                bound + a,
            ));
        }
    }
    Ok(out)
}

/// `(v[e])*(x+y) ≤ (u[e])*(x) + (u[e])*(y) + l` over all pairs of table
/// points whose sum lies in `v_table`.
pub fn lemma2_suite(
    u_table: &LatticeTable,
    v_table: &LatticeTable,
    l: f64,
) -> Vec<InequalityRecord> {
    let mut out = Vec::new();
    for (x, ux) in u_table.iter() {
        for (y, uy) in u_table.iter() {
            if let Some(vxy) = v_table.get(&x.add(y)) {
                let mut point = x.as_f64();
                point.extend(y.as_f64());
                out.push(InequalityRecord::new(
                    "subadditivity",
                    point,
                    vxy,
                    ux + uy + l,
                ));
            }
        }
    }
    out
}

/// `(u[e])*(x) - (v[e])*(x) ≥ Σ xⱼ ln σ - γ` on the common lattice.
pub fn lemma3_suite(
    u_table: &LatticeTable,
    v_table: &LatticeTable,
    sigma: f64,
    gamma: f64,
) -> Vec<InequalityRecord> {
    u_table
        .iter()
        .filter_map(|(alpha, ua)| {
            let va = v_table.get(alpha)?;
            let lhs = alpha.modulus() as f64 * sigma.ln() - gamma;
            Some(InequalityRecord::new(
                "dilation gap",
                alpha.as_f64(),
                lhs,
                ua - va,
            ))
        })
        .collect()
}

/// `(u*((1+δ)x) - u*(x)) / ‖x‖` at `x = r·direction/‖direction‖` for each radius.
pub fn lemma5_ratios<W: Weight>(
    u: W,
    delta: f64,
    direction: &[f64],
    radii: &[f64],
) -> Result<Vec<f64>> {
    let ustar = AdaptiveConjugate::new(u);
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    radii
        .iter()
        .map(|&r| {
            let x: Vec<f64> = direction.iter().map(|d| d * r / norm).collect();
            let y: Vec<f64> = x.iter().map(|v| v * (1.0 + delta)).collect();
            Ok((ustar.conjugate_at(&y)?.0 - ustar.conjugate_at(&x)?.0) / r)
        })
        .collect()
}

/// `(u[e])*(x) + (u*[e])*(x) ≤ Σ_{xⱼ≠0}(xⱼ ln xⱼ - xⱼ)`.
pub fn lemma6_suite<W: Weight>(
    u: &W,
    points: &[Vec<f64>],
    cfg: &SearchConfig,
) -> Result<Vec<InequalityRecord>> {
    points
        .par_iter()
        .map(|x| {
            let s = duality_sum(u, x, cfg)?;
            Ok(InequalityRecord::new(
                "duality upper bound",
                x.clone(),
                s,
                log_entropy(x),
            ))
        })
        .collect()
}

/// `(u[e])*(x) + (u*[e])*(x) ≥ Σ(xⱼ ln(xⱼ+1) - xⱼ) - n`.
pub fn corollary2_suite<W: Weight>(
    u: &W,
    points: &[Vec<f64>],
    cfg: &SearchConfig,
) -> Result<Vec<InequalityRecord>> {
    points
        .par_iter()
        .map(|x| {
            let s = duality_sum(u, x, cfg)?;
            let lower = compensated_sum(x.iter().map(|&v| v * (v + 1.0).ln() - v)) - x.len() as f64;
            Ok(InequalityRecord::new(
                "duality lower bound",
                x.clone(),
                lower,
                s,
            ))
        })
        .collect()
}

/// Checks `(g[e])*(x) ≥ ⟨x, t⟩ - g[e](t)` at sampled `t`; a cheap consistency
/// test that every reported conjugate dominates the objective it maximizes.
pub fn conjugate_dominates<W: Weight + ?Sized>(
    g: &W,
    x: &MultiIndex,
    ts: &[Vec<f64>],
    cfg: &SearchConfig,
) -> Result<Vec<InequalityRecord>> {
    let value = discrete_log_conjugate(g, &x.as_f64(), cfg)?.to_f64();
    Ok(ts
        .iter()
        .map(|t| {
            let s: Vec<f64> = t.iter().map(|v| v.exp()).collect();
            let lhs = compensated_sum(x.as_f64().iter().zip(t).map(|(a, b)| a * b)) - g.eval(&s);
            InequalityRecord::new("conjugate dominates", t.clone(), lhs, value)
        })
        .collect())
}
