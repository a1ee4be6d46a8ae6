//! Finite-grid estimates of the structural constants of a weight family and
//! pointwise checks of membership in the weight class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::check::InequalityRecord;
use crate::grid::uniform_axis;
use crate::numerics::scan::{decode, par_argmax};

use super::Weight;

/// Seed of the sampler used by the built-in randomized weight checks.
pub const CHECK_SEED: u64 = 0x5eed_c0de;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "lowercase")]
pub enum Condition {
    /// `φ_ν(x) + A ln(1 + ‖x‖) ≤ φ_{ν+1}(x) + C`
    I0 { a: f64 },
    /// `φ_ν(σx) ≤ φ_{ν+1}(x) + γ`
    I1 { sigma: f64 },
    /// `φ_ν(x + ξ) ≤ φ_{ν+1}(x) + K` for `ξ ∈ [0, 1]ⁿ`
    I2,
    /// `φ_ν(2x) ≤ φ_{ν+1}(x) + a`
    I3,
    /// `2φ_ν(x) ≤ φ_{ν+1}(x) + l`
    I4,
}

impl Condition {
    pub fn id(&self) -> &'static str {
        match self {
            Condition::I0 { .. } => "i0",
            Condition::I1 { .. } => "i1",
            Condition::I2 => "i2",
            Condition::I3 => "i3",
            Condition::I4 => "i4",
        }
    }

    pub(crate) fn cache_key(&self) -> String {
        match self {
            Condition::I0 { a } => format!("i0:{:016x}", a.to_bits()),
            Condition::I1 { sigma } => format!("i1:{:016x}", sigma.to_bits()),
            other => other.id().to_string(),
        }
    }

    /// `LHS - RHS` at `x` without the constant, for consecutive members.
    pub fn excess<W: Weight + ?Sized, V: Weight + ?Sized>(&self, lo: &W, hi: &V, x: &[f64]) -> f64 {
        match *self {
            Condition::I0 { a } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                lo.eval(x) + a * r.ln_1p() - hi.eval(x)
            }
            Condition::I1 { sigma } => {
                let s: Vec<f64> = x.iter().map(|v| sigma * v).collect();
                lo.eval(&s) - hi.eval(x)
            }
            Condition::I2 => {
                let h = hi.eval(x);
                unit_shifts(x.len())
                    .iter()
                    .map(|xi| {
                        let p: Vec<f64> = x.iter().zip(xi).map(|(a, b)| a + b).collect();
                        lo.eval(&p) - h
                    })
                    .fold(f64::NEG_INFINITY, nan_max)
            }
            Condition::I3 => {
                let s: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
                lo.eval(&s) - hi.eval(x)
            }
            Condition::I4 => 2.0 * lo.eval(x) - hi.eval(x),
        }
    }
}

/// The shifts `ξ ∈ {0, 1/2, 1}ⁿ` sampled for the unit-shift condition.
pub(crate) fn unit_shifts(n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                [0.0, 0.5, 1.0].into_iter().map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

fn nan_max(a: f64, b: f64) -> f64 {
    if b.is_nan() || a >= b {
        a
    } else {
        b
    }
}

/// Uniform grid over `[0, R]ⁿ` with `nodes` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeGrid {
    pub radius: f64,
    pub nodes: usize,
}

impl ProbeGrid {
    /// `[0, 20]ⁿ` with 401 nodes for `n = 1`, 201 for `n = 2` and 41 for `n = 3`.
    pub fn default_for(dim: usize) -> Self {
        let nodes = match dim {
            1 => 401,
            2 => 201,
            _ => 41,
        };
        ProbeGrid {
            radius: 20.0,
            nodes,
        }
    }

    /// The grid with every mesh cell halved; contains all nodes of `self`.
    pub fn refined(&self) -> Self {
        ProbeGrid {
            radius: self.radius,
            nodes: 2 * self.nodes - 1,
        }
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        ProbeGrid { radius, ..*self }
    }

    pub fn axis(&self) -> Vec<f64> {
        uniform_axis(0.0, self.radius, self.nodes)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSup {
    pub value: f64,
    pub witness: Vec<f64>,
}

/// Maximum of `f` over the product grid; NaN values are skipped and ties go
/// to the lexicographically first node. An all-`-inf` scan reports `-inf`
/// at the origin.
pub fn grid_sup<F: Fn(&[f64]) -> f64 + Sync>(dim: usize, grid: &ProbeGrid, f: F) -> GridSup {
    let axis = grid.axis();
    let m = axis.len();
    let node = |flat: usize| {
        let mut idx = vec![0; dim];
        decode(flat, m, dim, &mut idx);
        idx.iter().map(|&i| axis[i]).collect::<Vec<f64>>()
    };
    match par_argmax(m.pow(dim as u32), |i| f(&node(i))) {
        Some((value, flat)) => GridSup {
            value,
            witness: node(flat),
        },
        None => GridSup {
            value: f64::NEG_INFINITY,
            witness: vec![0.0; dim],
        },
    }
}

/// Grid suprema at radii `R`, `2R`, `4R` with a fixed node count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Both doublings raised the supremum by more than 10%.
    pub unbounded: bool,
}

pub fn divergence_diagnostic<F: Fn(&[f64]) -> f64 + Sync>(
    dim: usize,
    grid: &ProbeGrid,
    f: F,
) -> Divergence {
    let radii: Vec<f64> = [1.0, 2.0, 4.0].iter().map(|s| s * grid.radius).collect();
    let values: Vec<f64> = radii
        .iter()
        .map(|&r| grid_sup(dim, &grid.with_radius(r), &f).value)
        .collect();
    let grows = |a: f64, b: f64| b > a + 0.1 * a.abs() + 1e-9;
    let unbounded = grows(values[0], values[1]) && grows(values[1], values[2]);
    Divergence {
        radii,
        values,
        unbounded,
    }
}

/// Finite-grid lower bound for the constant of a condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub condition: Condition,
    pub nu: u32,
    pub value: f64,
    pub witness: Vec<f64>,
    pub grid: ProbeGrid,
    pub divergence: Divergence,
}

/// Estimates `sup (LHS - RHS)` of `excess` on `grid` and runs the
/// domain-doubling diagnostic.
pub fn estimate_excess<F: Fn(&[f64]) -> f64 + Sync>(
    condition: Condition,
    nu: u32,
    dim: usize,
    grid: &ProbeGrid,
    excess: F,
) -> ConstantEstimate {
    let sup = grid_sup(dim, grid, &excess);
    let divergence = divergence_diagnostic(dim, grid, &excess);
    ConstantEstimate {
        condition,
        nu,
        value: sup.value,
        witness: sup.witness,
        grid: *grid,
        divergence,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemCheck {
    pub passed: bool,
    /// Worst observed discrepancy (symmetry, monotonicity) or smallest ratio
    /// increment (growth).
    pub worst: f64,
    pub witness: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassAReport {
    pub symmetry: ItemCheck,
    pub monotonicity: ItemCheck,
    pub growth: ItemCheck,
}

impl ClassAReport {
    pub fn passed(&self) -> bool {
        self.symmetry.passed && self.monotonicity.passed && self.growth.passed
    }
}

fn scale_of(v: f64) -> f64 {
    v.abs().max(1.0)
}

/// Symmetry under sign flips at random points of `[-R, R]ⁿ`, monotonicity
/// between neighbouring nodes of `grid`, and strict growth of `g(x)/‖x‖` at
/// `‖x‖ ∈ {R/4, R/2, R}` along every axis and the diagonal.
pub fn check_class_a<W: Weight + ?Sized>(g: &W, grid: &ProbeGrid, seed: u64) -> ClassAReport {
    let n = g.dim();
    let r = grid.radius;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symmetry = ItemCheck {
        passed: true,
        worst: 0.0,
        witness: None,
    };
    for _ in 0..200 {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-r..=r)).collect();
        let ax: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        let (a, b) = (g.eval(&x), g.eval(&ax));
        let d = (a - b).abs() / scale_of(b);
        if d > symmetry.worst || d.is_nan() {
            symmetry.worst = d;
            symmetry.witness = Some(x);
        }
    }
    symmetry.passed = symmetry.worst <= 1e-12;

    let axis = grid.axis();
    let m = axis.len();
    let total = m.pow(n as u32);
    let mut monotonicity = ItemCheck {
        passed: true,
        worst: 0.0,
        witness: None,
    };
    for flat in 0..total {
        let mut idx = vec![0usize; n];
        decode(flat, m, n, &mut idx);
        let x: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        let gx = g.eval(&x);
        for k in 0..n {
            if idx[k] + 1 == m {
                continue;
            }
            let mut y = x.clone();
            y[k] = axis[idx[k] + 1];
            let drop = (gx - g.eval(&y)) / scale_of(gx);
            if drop > monotonicity.worst {
                monotonicity.worst = drop;
                monotonicity.witness = Some(x.clone());
            }
        }
    }
    monotonicity.passed = monotonicity.worst <= 1e-12;

    let mut directions: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|k| if k == j { 1.0 } else { 0.0 }).collect())
        .collect();
    if n > 1 {
        directions.push(vec![1.0 / (n as f64).sqrt(); n]);
    }
    let mut growth = ItemCheck {
        passed: true,
        worst: f64::INFINITY,
        witness: None,
    };
    for d in directions {
        let ratios: Vec<f64> = [0.25, 0.5, 1.0]
            .iter()
            .map(|s| {
                let t = s * r;
                let x: Vec<f64> = d.iter().map(|v| v * t).collect();
                g.eval(&x) / t
            })
            .collect();
        for w in ratios.windows(2) {
            let inc = w[1] - w[0];
            if inc < growth.worst || inc.is_nan() {
                growth.worst = inc;
                growth.witness = Some(d.clone());
            }
        }
    }
    growth.passed = growth.worst > 0.0;
    ClassAReport {
        symmetry,
        monotonicity,
        growth,
    }
}

/// First pair of random points in `[-R, R]ⁿ` violating midpoint convexity.
pub fn find_convexity_violation<W: Weight + ?Sized>(
    g: &W,
    radius: f64,
    samples: usize,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..=radius)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..=radius)).collect();
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
        let (gx, gy) = (g.eval(&x), g.eval(&y));
        let slack = 1e-10 + 1e-12 * scale_of(gx).max(scale_of(gy));
        if g.eval(&mid) > 0.5 * (gx + gy) + slack {
            return Some((x, y));
        }
    }
    None
}

/// Midpoint convexity of `f ∘ (g₁, ..., g_k)` on random pairs in `[-R, R]ⁿ`.
pub fn composition_midpoint_check<F, G>(
    outer: &F,
    inner: &[G],
    radius: f64,
    pairs: usize,
    seed: u64,
) -> Vec<InequalityRecord>
where
    F: Weight + ?Sized,
    G: Weight,
{
    let n = inner.first().map_or(0, |g| g.dim());
    let compose = |x: &[f64]| {
        let y: Vec<f64> = inner.iter().map(|g| g.eval(x)).collect();
        outer.eval(&y)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..pairs)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..=radius)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..=radius)).collect();
            let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            let mut point = x.clone();
            point.extend(&y);
            InequalityRecord::new(
                "composition midpoint",
                point,
                compose(&mid),
                0.5 * (compose(&x) + compose(&y)),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::FnWeight;

    #[test]
    fn class_a_examples() {
        let grid = ProbeGrid {
            radius: 10.0,
            nodes: 41,
        };
        let sq = FnWeight::new(1, |x: &[f64]| x[0] * x[0]);
        assert!(check_class_a(&sq, &grid, 1).passed());
        let norm = FnWeight::new(2, |x: &[f64]| (x[0] * x[0] + x[1] * x[1]).sqrt());
        let r = check_class_a(&norm, &grid, 1);
        assert!(r.symmetry.passed && r.monotonicity.passed && !r.growth.passed);
        let tilted = FnWeight::new(2, |x: &[f64]| x[0] * x[0] - x[1]);
        let r = check_class_a(&tilted, &grid, 1);
        assert!(!r.monotonicity.passed);
        assert!(r.monotonicity.witness.is_some());
    }

    #[test]
    fn grid_sup_breaks_ties_lexicographically() {
        let s = grid_sup(
            2,
            &ProbeGrid {
                radius: 1.0,
                nodes: 3,
            },
            |_| 1.0,
        );
        assert_eq!(s.witness, vec![0.0, 0.0]);
        let s = grid_sup(
            1,
            &ProbeGrid {
                radius: 2.0,
                nodes: 5,
            },
            |x| -(x[0] - 1.0).powi(2),
        );
        assert_eq!(s.witness, vec![1.0]);
    }

    #[test]
    fn unit_shift_set() {
        assert_eq!(unit_shifts(2).len(), 9);
    }
}
