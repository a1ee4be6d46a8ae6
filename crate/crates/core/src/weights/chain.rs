//! Checks that mollifying a family preserves its conditions up to index
//! shifts.

use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::Serialize;

use crate::check::InequalityRecord;
use crate::error::Result;

use super::conditions::{estimate_excess, grid_sup, Condition, ConstantEstimate, ProbeGrid};
use super::{Weight, WeightFamily};

/// One estimated constant of the mollified chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainConstant {
    /// One of `log-gap`, `unit-shift`, `doubling`, `mollified-doubling`.
    pub label: String,
    pub m: u32,
    pub estimate: ConstantEstimate,
    /// Constant predicted from the unmollified family, when one applies.
    pub bound: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MollifyChainReport {
    pub family: String,
    pub order: usize,
    /// Worst grid node of `φ_m ≤ φ_{m,1}` for each `m`.
    pub dominance: Vec<InequalityRecord>,
    pub constants: Vec<ChainConstant>,
    /// Estimates `i₀(A)`, `i₂`, `i₃` for the subfamily `{φ_{2m,1}}`.
    pub subfamily: Vec<ConstantEstimate>,
    pub passed: bool,
}

fn bounded(e: &ConstantEstimate) -> bool {
    e.value.is_finite() && !e.divergence.unbounded
}

fn within(value: f64, bound: f64) -> bool {
    value <= bound + 1e-8 * (1.0 + bound.abs())
}

/// Mollifies `family` with the bump kernel and estimates, for each `m` in
/// `ms`:
///
/// * dominance: `φ_m(x) ≤ φ_{m,1}(x)` on the grid nodes,
/// * `log-gap`: `s_{m,A} = sup φ_{m,1} + A ln(1+‖x‖) − φ_{m+1,1}`,
/// * `unit-shift`: `sup φ_{m,1}(x+ζ) − φ_{m+1,1}(x)` against `K_m`,
/// * `doubling`: `sup φ_{m,1}(2x) − φ_{m+2}(x)` against `K_m + a_{m+1}`,
/// * `mollified-doubling`: `sup φ_{m,1}(2x) − φ_{m+2,1}(x)` against `K_m + a_{m+1}`,
///
/// where `K_m` and `a_{m+1}` are the unit-shift and doubling constants of the
/// original family on the same grid.
pub fn verify_mollify_chain(
    family: &Arc<WeightFamily>,
    ms: RangeInclusive<u32>,
    grid: &ProbeGrid,
    order: usize,
    a: f64,
) -> Result<MollifyChainReport> {
    let dim = family.dim();
    let smooth = family.mollified(order, 1)?;
    let even = family.mollified(order, 2)?;
    let mut dominance = Vec::new();
    let mut constants = Vec::new();
    let mut subfamily = Vec::new();
    for m in ms {
        let phi = family.member(m)?;
        let phi1 = smooth.member(m)?;
        let gap = grid_sup(dim, grid, |x| phi.eval(x) - phi1.eval(x));
        let w = &gap.witness;
        dominance.push(InequalityRecord::new(
            format!("dominance m={m}"),
            w.clone(),
            phi.eval(w),
            phi1.eval(w),
        ));

        let k_m = family.estimate(Condition::I2, m, grid)?.value;
        let a_next = family.estimate(Condition::I3, m + 1, grid)?.value;
        let phi2 = family.member(m + 2)?;
        let phi21 = smooth.member(m + 2)?;

        let s = smooth.estimate(Condition::I0 { a }, m, grid)?;
        let k = smooth.estimate(Condition::I2, m, grid)?;
        let doubled = |x: &[f64]| {
            let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
            phi1.eval(&y)
        };
        let e21 = estimate_excess(Condition::I3, m, dim, grid, |x| doubled(x) - phi2.eval(x));
        let e22 = estimate_excess(Condition::I3, m, dim, grid, |x| doubled(x) - phi21.eval(x));
        for (label, estimate, bound) in [
            ("log-gap", s, None),
            ("unit-shift", k, Some(k_m)),
            ("doubling", e21, Some(k_m + a_next)),
            ("mollified-doubling", e22, Some(k_m + a_next)),
        ] {
            let holds = bounded(&estimate) && bound.is_none_or(|b| within(estimate.value, b));
            constants.push(ChainConstant {
                label: label.to_string(),
                m,
                estimate,
                bound,
                holds,
            });
        }

        for c in [Condition::I0 { a }, Condition::I2, Condition::I3] {
            subfamily.push(even.estimate(c, m, grid)?);
        }
    }
    let passed = dominance.iter().all(|r| r.holds(1e-8))
        && constants.iter().all(|c| c.holds)
        && subfamily.iter().all(bounded);
    Ok(MollifyChainReport {
        family: family.name().to_string(),
        order,
        dominance,
        constants,
        subfamily,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{
        make_radial_family, make_shifted_family, Profile, DEFAULT_QUADRATURE_ORDER,
    };

    #[test]
    fn square_family_chain_is_bounded() {
        let f = Arc::new(make_radial_family(Profile::Square, 2.0, 1).unwrap());
        let grid = ProbeGrid {
            radius: 10.0,
            nodes: 201,
        };
        let r = verify_mollify_chain(&f, 1..=2, &grid, DEFAULT_QUADRATURE_ORDER, 1.0).unwrap();
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.constants.len(), 8);
        assert_eq!(r.subfamily.len(), 6);
    }

    #[test]
    fn shifted_family_unit_shift_constant_is_zero() {
        let f = Arc::new(make_shifted_family(Profile::Square, 1).unwrap());
        let grid = ProbeGrid {
            radius: 10.0,
            nodes: 201,
        };
        let r = verify_mollify_chain(&f, 0..=1, &grid, DEFAULT_QUADRATURE_ORDER, 1.0).unwrap();
        for c in r.constants.iter().filter(|c| c.label == "unit-shift") {
            assert!(c.estimate.value.abs() < 1e-8, "{}", c.estimate.value);
            assert!(c.bound.unwrap().abs() < 1e-8);
        }
    }
}
