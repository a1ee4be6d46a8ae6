//! The seminorms `p`, `ρ`, `‖·‖` and `q` as finite-grid suprema.
//!
//! All scans run in the log domain and multiply by `|c|` only at the end, so
//! `seminorm(c·f) = |c|·seminorm(f)` holds bit for bit when `f` has unit
//! scale.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugate::LatticeTable;
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::grid::{uniform_axis, GridFunction};
use crate::multi_index::MultiIndex;
use crate::numerics::optimize::{local_refine, SearchConfig};
use crate::numerics::scan::decode;
use crate::weights::Weight;

use super::TestFunction;

/// Symmetric real grid `[-R, R]ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    pub radius: f64,
    pub nodes: usize,
}

impl RealGrid {
    /// `[-10, 10]ⁿ` with 2001, 201 or 41 nodes per axis for `n = 1, 2, 3`.
    pub fn default_for(dim: usize) -> Self {
        let nodes = match dim {
            1 => 2001,
            2 => 201,
            _ => 41,
        };
        RealGrid {
            radius: 10.0,
            nodes,
        }
    }

    pub fn axis(&self) -> Vec<f64> {
        uniform_axis(-self.radius, self.radius, self.nodes)
    }
}

/// Grid over `{|Re zⱼ| ≤ R, |Im zⱼ| ≤ R_im}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexGrid {
    pub re_radius: f64,
    pub re_nodes: usize,
    pub im_radius: f64,
    pub im_nodes: usize,
}

impl ComplexGrid {
    /// `Re ∈ [-8, 8]`, `Im ∈ [-3, 3]`; 321×121 nodes in one dimension,
    /// 81×31 per coordinate in two and 17×9 in three.
    pub fn default_for(dim: usize) -> Self {
        let (re_nodes, im_nodes) = match dim {
            1 => (321, 121),
            2 => (81, 31),
            _ => (17, 9),
        };
        ComplexGrid {
            re_radius: 8.0,
            re_nodes,
            im_radius: 3.0,
            im_nodes,
        }
    }
}

/// What was searched to obtain a seminorm value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Truncation {
    pub radius: f64,
    pub nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_nodes: Option<usize>,
    /// Largest `|α|` (for `ρ`, `‖·‖` and `q`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u32>,
    /// Largest `|β|` (for `‖·‖`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_bound: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormReport {
    /// `"p"`, `"rho"`, `"g"` or `"q"`.
    pub seminorm: String,
    pub m: u32,
    pub value: f64,
    /// Argmax point; for `p` the real parts followed by the imaginary parts.
    pub witness: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<MultiIndex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<MultiIndex>,
    pub truncation: Truncation,
    /// The supremum sits on a face of the search box.
    pub saturated: bool,
    /// Per-shell maxima of the truncated multi-index set.
    pub shell_maxima: Vec<f64>,
    /// The last three shell ratios are below 1/2.
    pub stabilized: bool,
}

impl SeminormReport {
    pub fn reliable(&self) -> bool {
        !self.saturated && self.stabilized
    }
}

struct Scan {
    ln_value: f64,
    point: usize,
    term: usize,
    shells: Vec<f64>,
}

impl Scan {
    fn empty(n_shells: usize) -> Self {
        Scan {
            ln_value: f64::NEG_INFINITY,
            point: usize::MAX,
            term: usize::MAX,
            shells: vec![f64::NEG_INFINITY; n_shells],
        }
    }

    fn offer(&mut self, v: f64, point: usize, term: usize, shell: usize) {
        let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
        if v > self.shells[shell] {
            self.shells[shell] = v;
        }
        if v > self.ln_value || (v == self.ln_value && (point, term) < (self.point, self.term)) {
            self.ln_value = v;
            self.point = point;
            self.term = term;
        }
    }

    fn merge(mut self, other: Scan) -> Scan {
        for (a, b) in self.shells.iter_mut().zip(&other.shells) {
            *a = a.max(*b);
        }
        if other.ln_value > self.ln_value
            || (other.ln_value == self.ln_value
                && (other.point, other.term) < (self.point, self.term))
        {
            self.ln_value = other.ln_value;
            self.point = other.point;
            self.term = other.term;
        }
        self
    }
}

/// Maximum of `f(point, term)` over all pairs, tracking per-shell maxima;
/// deterministic under any scheduling.
fn scan<F: Fn(usize, usize) -> f64 + Sync>(points: usize, shells: &[usize], f: F) -> Scan {
    let n_shells = shells.iter().max().map_or(1, |s| s + 1);
    (0..points)
        .into_par_iter()
        .fold(
            || Scan::empty(n_shells),
            |mut acc, p| {
                for (t, &s) in shells.iter().enumerate() {
                    acc.offer(f(p, t), p, t, s);
                }
                acc
            },
        )
        .reduce(|| Scan::empty(n_shells), Scan::merge)
}

fn stabilized(ln_shells: &[f64]) -> bool {
    let k = ln_shells.len();
    if k < 4 {
        return false;
    }
    (k - 3..k).all(|i| {
        let (hi, lo) = (ln_shells[i], ln_shells[i - 1]);
        hi == f64::NEG_INFINITY || hi - lo < 0.5f64.ln()
    })
}

/// `ln |D^k f_j(t_i)|` for every node of `axis`.
fn ln_derivative_table(f: &TestFunction, j: usize, axis: &[f64], order: usize) -> Vec<Vec<f64>> {
    axis.par_iter()
        .map(|&t| {
            f.factor_derivatives(j, t, order)
                .into_iter()
                .map(|d| d.abs().ln())
                .collect()
        })
        .collect()
}

fn check_table(dim: usize, table: &LatticeTable, needed: u32) -> Result<()> {
    if table.dim() != dim {
        return Err(Error::InvalidArgument(format!(
            "table is {}-dimensional, test function {dim}-dimensional",
            table.dim(),
        )));
    }
    if table.bound() < needed {
        return Err(Error::InvalidArgument(format!(
            "table bound {} is below the requested order {needed}",
            table.bound()
        )));
    }
    Ok(())
}

fn table_values(table: &LatticeTable, terms: &[MultiIndex]) -> Vec<f64> {
    terms
        .iter()
        .map(|a| table.get(a).expect("index within table bound"))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn report(
    scale: f64,
    seminorm: &str,
    m: u32,
    s: Scan,
    witness: Vec<f64>,
    alpha: Option<MultiIndex>,
    beta: Option<MultiIndex>,
    truncation: Truncation,
    saturated: bool,
    stable: bool,
) -> SeminormReport {
    let c = scale.abs();
    let lift = |l: f64| {
        if c == 0.0 || l == f64::NEG_INFINITY {
            0.0
        } else {
            c * l.exp()
        }
    };
    let stable = stable || lift(s.ln_value) == 0.0;
    SeminormReport {
        seminorm: seminorm.to_string(),
        m,
        value: lift(s.ln_value),
        witness,
        alpha,
        beta,
        truncation,
        saturated: saturated && lift(s.ln_value) > 0.0,
        shell_maxima: s.shells.iter().map(|&l| lift(l)).collect(),
        stabilized: stable,
    }
}

/// `p_{ν,m}(f) = sup_z |f(z)| (1+‖z‖)^m e^{-φ_ν(Im z)}` with `phi = φ_ν`:
/// the grid maximum, then golden-section ascent within one cell of it.
pub fn p_seminorm<W: Weight + ?Sized>(
    f: &TestFunction,
    phi: &W,
    m: u32,
    grid: &ComplexGrid,
) -> Result<SeminormReport> {
    let n = f.dim();
    if phi.dim() != n {
        return Err(Error::InvalidArgument(
            "weight and test function dimensions differ".into(),
        ));
    }
    let re = uniform_axis(-grid.re_radius, grid.re_radius, grid.re_nodes);
    let im = uniform_axis(-grid.im_radius, grid.im_radius, grid.im_nodes);
    let cell = re.len() * im.len();
    let single: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            (0..cell)
                .map(|c| f.ln_abs_factor(j, Complex64::new(re[c / im.len()], im[c % im.len()])))
                .collect()
        })
        .collect();
    let total = cell.pow(n as u32);
    let mf = m as f64;
    // Coordinates are (Re z, Im z) concatenated.
    let objective = |w: &[f64]| {
        let mut ln = 0.0;
        let mut norm2 = 0.0;
        for j in 0..n {
            ln += f.ln_abs_factor(j, Complex64::new(w[j], w[n + j]));
            norm2 += w[j] * w[j] + w[n + j] * w[n + j];
        }
        let y: Vec<f64> = w[n..].iter().map(|v| v.abs()).collect();
        ln + mf * norm2.sqrt().ln_1p() - phi.eval(&y)
    };
    let mut s = scan(total, &[0], |p, _| {
        let mut idx = [0usize; 3];
        decode(p, cell, n, &mut idx[..n]);
        let mut ln = 0.0;
        let mut norm2 = 0.0;
        let mut y = [0.0; 3];
        for j in 0..n {
            let c = idx[j];
            ln += single[j][c];
            let (a, b) = (re[c / im.len()], im[c % im.len()]);
            norm2 += a * a + b * b;
            y[j] = b.abs();
        }
        ln + mf * norm2.sqrt().ln_1p() - phi.eval(&y[..n])
    });
    let mut idx = [0usize; 3];
    let mut witness = vec![0.0; 2 * n];
    let mut saturated = false;
    if s.point != usize::MAX {
        decode(s.point, cell, n, &mut idx[..n]);
        witness = (0..n)
            .map(|j| re[idx[j] / im.len()])
            .chain((0..n).map(|j| im[idx[j] % im.len()]))
            .collect();
        saturated = (0..n).any(|j| {
            let (r, i) = (idx[j] / im.len(), idx[j] % im.len());
            r == 0 || r + 1 == re.len() || i == 0 || i + 1 == im.len()
        });
        let h_re = 2.0 * grid.re_radius / (grid.re_nodes.max(2) - 1) as f64;
        let h_im = 2.0 * grid.im_radius / (grid.im_nodes.max(2) - 1) as f64;
        let radius: Vec<f64> = (0..2 * n)
            .map(|k| if k < n { h_re } else { h_im })
            .collect();
        let hi: Vec<f64> = (0..2 * n)
            .map(|k| {
                if k < n {
                    grid.re_radius
                } else {
                    grid.im_radius
                }
            })
            .collect();
        let lo: Vec<f64> = hi.iter().map(|v| -v).collect();
        let refined = local_refine(
            objective,
            &witness,
            &radius,
            &lo,
            &hi,
            &SearchConfig::default(),
        );
        if refined.value > s.ln_value {
            s.ln_value = refined.value;
            witness = refined.point;
        }
    }
    let truncation = Truncation {
        radius: grid.re_radius,
        nodes: grid.re_nodes,
        im_radius: Some(grid.im_radius),
        im_nodes: Some(grid.im_nodes),
        max_order: None,
        lattice_bound: None,
    };
    Ok(report(
        f.scale(),
        "p",
        m,
        s,
        witness,
        None,
        None,
        truncation,
        saturated,
        true,
    ))
}

/// Product grid over `axes` with per-axis tables of `ln |D^k f_j|`.
struct DerivativeGrid<'a> {
    axes: &'a [Vec<f64>],
    ln_d: Vec<Vec<Vec<f64>>>,
    len: usize,
}

impl<'a> DerivativeGrid<'a> {
    fn new(f: &TestFunction, axes: &'a [Vec<f64>], order: usize) -> Self {
        let ln_d = axes
            .iter()
            .enumerate()
            .map(|(j, a)| ln_derivative_table(f, j, a, order))
            .collect();
        DerivativeGrid {
            axes,
            ln_d,
            len: axes.iter().map(Vec::len).product(),
        }
    }

    fn index(&self, flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        let mut r = flat;
        for k in (0..self.axes.len()).rev() {
            idx[k] = r % self.axes[k].len();
            r /= self.axes[k].len();
        }
        idx
    }

    fn point(&self, flat: usize) -> Vec<f64> {
        let idx = self.index(flat);
        self.axes
            .iter()
            .enumerate()
            .map(|(k, a)| a[idx[k]])
            .collect()
    }

    fn on_face(&self, flat: usize) -> bool {
        let idx = self.index(flat);
        self.axes
            .iter()
            .enumerate()
            .any(|(k, a)| idx[k] == 0 || idx[k] + 1 == a.len())
    }

    fn ln_derivative(&self, idx: &[usize; 3], alpha: &MultiIndex) -> f64 {
        alpha
            .components()
            .iter()
            .enumerate()
            .map(|(j, &k)| self.ln_d[j][idx[j]][k as usize])
            .sum()
    }
}

fn real_axes(grid: &RealGrid, n: usize) -> Vec<Vec<f64>> {
    vec![grid.axis(); n]
}

/// `ρ_{m,ν}(f) = sup_{x,α} (1+‖x‖)^m |D^α f(x)| e^{ψ*_ν(α)} / α!` over
/// `|α| ≤ max_order`, with `table` holding `ψ*_ν`.
pub fn rho_seminorm(
    f: &TestFunction,
    table: &LatticeTable,
    m: u32,
    grid: &RealGrid,
    max_order: u32,
) -> Result<SeminormReport> {
    check_table(f.dim(), table, max_order)?;
    let n = f.dim();
    let axes = real_axes(grid, n);
    let dg = DerivativeGrid::new(f, &axes, max_order as usize);
    let terms = MultiIndex::up_to(n, max_order);
    let shells: Vec<usize> = terms.iter().map(|a| a.modulus() as usize).collect();
    let psi = table_values(table, &terms);
    let ln_fact: Vec<f64> = terms.iter().map(MultiIndex::ln_factorial).collect();
    let mf = m as f64;
    let s = scan(dg.len, &shells, |p, t| {
        let idx = dg.index(p);
        let norm = (0..n).map(|k| axes[k][idx[k]].powi(2)).sum::<f64>().sqrt();
        mf * norm.ln_1p() + dg.ln_derivative(&idx, &terms[t]) - ln_fact[t] + psi[t]
    });
    let found = s.point != usize::MAX;
    let witness = if found {
        dg.point(s.point)
    } else {
        vec![0.0; n]
    };
    let saturated = found && dg.on_face(s.point);
    let alpha = found.then(|| terms[s.term].clone());
    let stable = stabilized(&s.shells);
    let truncation = Truncation {
        radius: grid.radius,
        nodes: grid.nodes,
        im_radius: None,
        im_nodes: None,
        max_order: Some(max_order),
        lattice_bound: None,
    };
    Ok(report(
        f.scale(),
        "rho",
        m,
        s,
        witness,
        alpha,
        None,
        truncation,
        saturated,
        stable,
    ))
}

/// `‖f‖_{m,ψ*_ν} = sup_{x, |α| ≤ m, β} |x^β D^α f(x)| e^{ψ*_ν(β)} / β!` over
/// `|β| ≤ lattice_bound`.
pub fn g_seminorm(
    f: &TestFunction,
    table: &LatticeTable,
    m: u32,
    grid: &RealGrid,
    lattice_bound: u32,
) -> Result<SeminormReport> {
    let n = f.dim();
    let axes = real_axes(grid, n);
    let ln_d = (0..n)
        .map(|j| ln_derivative_table(f, j, &axes[j], m as usize))
        .collect();
    g_seminorm_from_tables(f.scale(), &axes, ln_d, table, m, grid, lattice_bound)
}

/// The `‖·‖_{m,ψ*}` scan for `c · Π h_j(x_j)` given per-axis tables
/// `ln_d[j][i][k] = ln |D^k h_j(axes[j][i])|`.
pub(crate) fn g_seminorm_from_tables(
    scale: f64,
    axes: &[Vec<f64>],
    ln_d: Vec<Vec<Vec<f64>>>,
    table: &LatticeTable,
    m: u32,
    grid: &RealGrid,
    lattice_bound: u32,
) -> Result<SeminormReport> {
    let n = axes.len();
    check_table(n, table, lattice_bound)?;
    let dg = DerivativeGrid {
        axes,
        ln_d,
        len: axes.iter().map(Vec::len).product(),
    };
    let alphas = MultiIndex::up_to(n, m);
    let betas = MultiIndex::up_to(n, lattice_bound);
    let psi = table_values(table, &betas);
    let ln_fact: Vec<f64> = betas.iter().map(MultiIndex::ln_factorial).collect();
    let shells: Vec<usize> = alphas
        .iter()
        .flat_map(|_| betas.iter().map(|b| b.modulus() as usize))
        .collect();
    let nb = betas.len();
    let s = scan(dg.len, &shells, |p, t| {
        let idx = dg.index(p);
        let (a, b) = (t / nb, t % nb);
        let x: Vec<f64> = (0..n).map(|k| axes[k][idx[k]]).collect();
        betas[b].ln_abs_pow(&x) + dg.ln_derivative(&idx, &alphas[a]) - ln_fact[b] + psi[b]
    });
    let found = s.point != usize::MAX;
    let witness = if found {
        dg.point(s.point)
    } else {
        vec![0.0; n]
    };
    let saturated = found && dg.on_face(s.point);
    let (alpha, beta) = if found {
        (
            Some(alphas[s.term / nb].clone()),
            Some(betas[s.term % nb].clone()),
        )
    } else {
        (None, None)
    };
    let stable = stabilized(&s.shells);
    let truncation = Truncation {
        radius: grid.radius,
        nodes: grid.nodes,
        im_radius: None,
        im_nodes: None,
        max_order: Some(m),
        lattice_bound: Some(lattice_bound),
    };
    Ok(report(
        scale, "g", m, s, witness, alpha, beta, truncation, saturated, stable,
    ))
}

/// `q_{m,ν}(f) = sup_{x, |α| ≤ m} |D^α f(x)| e^{φ*_ν(x)}` on the nodes of
/// `phi_star`.
pub fn q_seminorm(f: &TestFunction, phi_star: &GridFunction, m: u32) -> Result<SeminormReport> {
    let n = f.dim();
    if phi_star.dim() != n {
        return Err(Error::InvalidArgument(
            "conjugate grid and test function dimensions differ".into(),
        ));
    }
    let axes = phi_star.axes();
    let dg = DerivativeGrid::new(f, axes, m as usize);
    let alphas = MultiIndex::up_to(n, m);
    let shells: Vec<usize> = alphas.iter().map(|a| a.modulus() as usize).collect();
    let s = scan(dg.len, &shells, |p, t| {
        let idx = dg.index(p);
        let ln_d = dg.ln_derivative(&idx, &alphas[t]);
        match phi_star.value(p) {
            ExtendedReal::Finite(v) => ln_d + v,
            ExtendedReal::PosInf if ln_d > f64::NEG_INFINITY => f64::INFINITY,
            ExtendedReal::PosInf => f64::NEG_INFINITY,
        }
    });
    let found = s.point != usize::MAX;
    let witness = if found {
        dg.point(s.point)
    } else {
        vec![0.0; n]
    };
    let saturated = found && dg.on_face(s.point);
    let alpha = found.then(|| alphas[s.term].clone());
    let truncation = Truncation {
        radius: axes
            .iter()
            .flat_map(|a| [a[0].abs(), a[a.len() - 1].abs()])
            .fold(0.0, f64::max),
        nodes: axes[0].len(),
        im_radius: None,
        im_nodes: None,
        max_order: Some(m),
        lattice_bound: None,
    };
    Ok(report(
        f.scale(),
        "q",
        m,
        s,
        witness,
        alpha,
        None,
        truncation,
        saturated,
        true,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate::lattice_conjugate_table;
    use crate::numerics::optimize::SearchConfig;
    use crate::weights::FnWeight;

    fn small_complex() -> ComplexGrid {
        ComplexGrid {
            re_radius: 6.0,
            re_nodes: 121,
            im_radius: 2.0,
            im_nodes: 41,
        }
    }

    #[test]
    fn p_of_gaussian_peaks_at_origin() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let phi = FnWeight::new(1, |y: &[f64]| 2.0 * y[0] * y[0]);
        let r = p_seminorm(&f, &phi, 0, &small_complex()).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.witness, vec![0.0, 0.0]);
        assert!(!r.saturated);
        let r2 = p_seminorm(&f, &phi, 2, &small_complex()).unwrap();
        assert!(r2.value > 1.0);
        assert_eq!(r2.witness[1], 0.0);
        // (1+t)² e^{-t²/2} peaks where t² + t = 2, i.e. t = 1.
        assert!((r2.value - 4.0 * (-0.5f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn zero_function_has_zero_seminorms() {
        let z = TestFunction::zero(1).unwrap();
        let phi = FnWeight::new(1, |y: &[f64]| y[0] * y[0]);
        assert_eq!(
            p_seminorm(&z, &phi, 1, &small_complex()).unwrap().value,
            0.0
        );
        let table = lattice_conjugate_table(&phi, 8, &SearchConfig::default()).unwrap();
        let grid = RealGrid {
            radius: 5.0,
            nodes: 101,
        };
        assert_eq!(rho_seminorm(&z, &table, 0, &grid, 8).unwrap().value, 0.0);
        assert_eq!(g_seminorm(&z, &table, 0, &grid, 8).unwrap().value, 0.0);
    }

    #[test]
    fn g_seminorm_terms() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let phi = FnWeight::new(1, |y: &[f64]| 4.0 * y[0] * y[0]);
        let table = lattice_conjugate_table(&phi, 2, &SearchConfig::default()).unwrap();
        let grid = RealGrid {
            radius: 1.0,
            nodes: 3,
        };
        let r = g_seminorm(&f, &table, 0, &grid, 0).unwrap();
        assert_eq!(r.value, 1.0);
        let r = g_seminorm(
            &f,
            &table,
            0,
            &RealGrid {
                radius: 1.0,
                nodes: 2,
            },
            2,
        )
        .unwrap();
        let psi2 = table.get(&MultiIndex::new(vec![2])).unwrap();
        let beta2 = (-0.5f64).exp() * psi2.exp() / 2.0;
        let beta0 = (-0.5f64).exp();
        assert!((r.value - beta0.max(beta2)).abs() < 1e-15);
    }

    #[test]
    fn q_of_gaussian_against_square_weight() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let axis = uniform_axis(-10.0, 10.0, 401);
        let star = GridFunction::from_fn(vec![axis], |x| x[0] * x[0] / 4.0).unwrap();
        let r = q_seminorm(&f, &star, 0).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.witness, vec![0.0]);
    }

    #[test]
    fn scaling_is_exact() {
        let f = TestFunction::hermite_gaussian(1, 0.5, 1).unwrap();
        let phi = FnWeight::new(1, |y: &[f64]| 4.0 * y[0] * y[0]);
        let table = lattice_conjugate_table(&phi, 10, &SearchConfig::default()).unwrap();
        let grid = RealGrid {
            radius: 6.0,
            nodes: 121,
        };
        for c in [-3.0, 0.25, 7.1] {
            let g = f.scaled(c).unwrap();
            let a = rho_seminorm(&f, &table, 1, &grid, 10).unwrap().value;
            let b = rho_seminorm(&g, &table, 1, &grid, 10).unwrap().value;
            assert_eq!(b, f64::abs(c) * a);
            let a = p_seminorm(&f, &phi, 1, &small_complex()).unwrap().value;
            let b = p_seminorm(&g, &phi, 1, &small_complex()).unwrap().value;
            assert_eq!(b, f64::abs(c) * a);
        }
    }

    #[test]
    fn rho_reports_stabilization() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let phi = FnWeight::new(1, |y: &[f64]| 16.0 * y[0] * y[0]);
        let table = lattice_conjugate_table(&phi, 20, &SearchConfig::default()).unwrap();
        let r = rho_seminorm(
            &f,
            &table,
            0,
            &RealGrid {
                radius: 8.0,
                nodes: 801,
            },
            20,
        )
        .unwrap();
        assert!(r.stabilized && !r.saturated);
        assert_eq!(r.alpha, Some(MultiIndex::new(vec![0])));
        assert!((r.value - 1.0).abs() < 1e-15);
        assert_eq!(r.shell_maxima.len(), 21);
    }
}
