use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::multi_index::{ln_factorial, MultiIndex};
use crate::numerics::optimize::{maximize, Domain, SearchConfig};
use crate::numerics::sum::CompensatedSum;
use crate::weights::Weight;

/// `g[e](t) = g(e^{t₁}, ..., e^{tₙ})`.
pub fn log_substitute<W: Weight + ?Sized>(g: &W, t: &[f64]) -> Result<f64> {
    let mut s = Vec::with_capacity(t.len());
    for (coordinate, &tj) in t.iter().enumerate() {
        let e = tj.exp();
        if !e.is_finite() {
            return Err(Error::ExpOverflow {
                coordinate,
                value: tj,
            });
        }
        s.push(e);
    }
    Ok(g.eval(&s))
}

/// `(g[e])*(x) = sup_t (⟨x, t⟩ - g(e^t))`.
///
/// Coordinates with `xⱼ > 0` are searched in `t`. For `xⱼ = 0` the term
/// `xⱼtⱼ` vanishes and the search runs over `sⱼ = e^{tⱼ} ∈ [0, ∞)` directly,
/// which contains the limit `tⱼ → -∞` as the point `sⱼ = 0`. Any negative
/// coordinate gives `+inf`.
pub fn discrete_log_conjugate<W: Weight + ?Sized>(
    g: &W,
    x: &[f64],
    cfg: &SearchConfig,
) -> Result<ExtendedReal> {
    if x.len() != g.dim() {
        return Err(Error::InvalidArgument(format!(
            "point of dimension {} for a {}-dimensional weight",
            x.len(),
            g.dim()
        )));
    }
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("NaN coordinate".into()));
    }
    if x.iter().any(|&v| v < 0.0) {
        return Ok(ExtendedReal::PosInf);
    }
    let domains: Vec<Domain> = x
        .iter()
        .map(|&v| {
            if v > 0.0 {
                Domain::Line
            } else {
                Domain::HalfLine
            }
        })
        .collect();
    let mut s = vec![0.0; x.len()];
    let objective = |p: &[f64]| {
        let mut acc = CompensatedSum::new();
        for j in 0..p.len() {
            if x[j] > 0.0 {
                s[j] = p[j].exp();
                acc.add(x[j] * p[j]);
            } else {
                s[j] = p[j];
            }
        }
        if s.iter().any(|v| !v.is_finite()) {
            return f64::NEG_INFINITY;
        }
        acc.add(-g.eval(&s));
        acc.value()
    };
    let m = maximize(objective, &domains, cfg)?;
    Ok(ExtendedReal::Finite(m.value))
}

/// Values `ψ*(α) = (g[e])*(α)` for all multi-indices with `|α| ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeTable {
    dim: usize,
    bound: u32,
    values: BTreeMap<MultiIndex, f64>,
}

/// Growth of a lattice table along rays `k ↦ kα` from the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayGrowth {
    /// Second differences along every ray are nonnegative (up to `1e-9`).
    pub convex: bool,
    /// `(ψ*(kα) - ψ*(0)) / k` is nondecreasing in `k` along every ray.
    pub slopes_nondecreasing: bool,
    /// Largest `(ψ*(kα) - ψ*(0)) / (k|α|)` seen at the outermost point of each ray.
    pub final_slopes: Vec<(MultiIndex, f64)>,
    pub witness: Option<MultiIndex>,
}

impl LatticeTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<f64> {
        self.values.get(alpha).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.values.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Checks growth along the coordinate rays and the diagonal.
    pub fn ray_growth(&self) -> RayGrowth {
        let n = self.dim;
        let mut directions: Vec<MultiIndex> = (0..n).map(|j| MultiIndex::unit(n, j, 1)).collect();
        if n > 1 {
            directions.push(MultiIndex::new(vec![1; n]));
        }
        let origin = self.get(&MultiIndex::zero(n)).unwrap_or(0.0);
        let mut out = RayGrowth {
            convex: true,
            slopes_nondecreasing: true,
            final_slopes: Vec::new(),
            witness: None,
        };
        for dir in directions {
            let mut ray = vec![origin];
            let mut k = 1u32;
            loop {
                let comps: Vec<u32> = dir.components().iter().map(|&c| c * k).collect();
                match self.get(&MultiIndex::new(comps)) {
                    Some(v) => ray.push(v),
                    None => break,
                }
                k += 1;
            }
            for i in 1..ray.len().saturating_sub(1) {
                if ray[i + 1] - 2.0 * ray[i] + ray[i - 1] < -1e-9 && out.convex {
                    out.convex = false;
                    out.witness.get_or_insert_with(|| scale(&dir, i as u32));
                }
            }
            let slopes: Vec<f64> = (1..ray.len())
                .map(|k| (ray[k] - origin) / k as f64)
                .collect();
            for w in 1..slopes.len() {
                if slopes[w] < slopes[w - 1] - 1e-9 && out.slopes_nondecreasing {
                    out.slopes_nondecreasing = false;
                    out.witness.get_or_insert_with(|| scale(&dir, w as u32 + 1));
                }
            }
            if let Some(&last) = slopes.last() {
                out.final_slopes
                    .push((dir.clone(), last / dir.modulus() as f64));
            }
        }
        out
    }
}

fn scale(dir: &MultiIndex, k: u32) -> MultiIndex {
    MultiIndex::new(dir.components().iter().map(|&c| c * k).collect())
}

pub fn lattice_conjugate_table<W: Weight + ?Sized>(
    g: &W,
    bound: u32,
    cfg: &SearchConfig,
) -> Result<LatticeTable> {
    let n = g.dim();
    let indices = MultiIndex::up_to(n, bound);
    let entries: Vec<Result<(MultiIndex, f64)>> = indices
        .into_par_iter()
        .map(|alpha| {
            let v = discrete_log_conjugate(g, &alpha.as_f64(), cfg)?;
            let v = v
                .finite()
                .ok_or_else(|| Error::InvalidArgument(format!("infinite conjugate at {alpha}")))?;
            Ok((alpha, v))
        })
        .collect();
    let values = entries.into_iter().collect::<Result<BTreeMap<_, _>>>()?;
    Ok(LatticeTable {
        dim: n,
        bound,
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesMode {
    /// Terms divided by `j!`.
    Factorial,
    /// Terms divided by `|j|!`.
    ModulusFactorial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesReport {
    /// Partial sums through shells `0, 1, ..., terms`.
    pub partial_sums: Vec<f64>,
    /// Sum of the terms in each shell.
    pub increments: Vec<f64>,
    /// First shell at which the last ten increments were each below
    /// `1e-14` times the partial sum.
    pub converged_at: Option<usize>,
    /// Geometric extrapolation of the remaining mass after the last shell.
    pub tail_estimate: f64,
    /// Increments grew for ten consecutive shells.
    pub diverging: bool,
}

/// Partial sums of `Σ e^{(g[e])*(j)} / (b^{|j|} j!)` (or `|j|!`) by shells.
pub fn series_partial_sums<W: Weight + ?Sized>(
    g: &W,
    b: f64,
    mode: SeriesMode,
    terms: u32,
    cfg: &SearchConfig,
) -> Result<SeriesReport> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "series base must be positive, got {b}"
        )));
    }
    let table = lattice_conjugate_table(g, terms, cfg)?;
    let n = g.dim();
    let ln_b = b.ln();
    let mut increments = Vec::with_capacity(terms as usize + 1);
    for k in 0..=terms {
        let shell: CompensatedSum = MultiIndex::shell(n, k)
            .iter()
            .map(|j| {
                let denom = match mode {
                    SeriesMode::Factorial => j.ln_factorial(),
                    SeriesMode::ModulusFactorial => ln_factorial(k),
                };
                (table.get(j).unwrap() - k as f64 * ln_b - denom).exp()
            })
            .collect();
        increments.push(shell.value());
    }
    let mut running = CompensatedSum::new();
    let partial_sums: Vec<f64> = increments
        .iter()
        .map(|&inc| {
            running.add(inc);
            running.value()
        })
        .collect();
    let converged_at = (9..increments.len())
        .find(|&k| (k - 9..=k).all(|i| increments[i] < 1e-14 * partial_sums[k]));
    let diverging = increments
        .windows(11)
        .any(|w| w.windows(2).all(|p| p[1] > p[0]));
    let tail_estimate = match increments.len() {
        0 | 1 => f64::INFINITY,
        len => {
            let (prev, last) = (increments[len - 2], increments[len - 1]);
            let r = if prev > 0.0 { last / prev } else { 0.0 };
            if r < 1.0 {
                last * r / (1.0 - r)
            } else {
                f64::INFINITY
            }
        }
    };
    Ok(SeriesReport {
        partial_sums,
        increments,
        converged_at,
        tail_estimate,
        diverging,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::FnWeight;

    fn square() -> FnWeight<impl Fn(&[f64]) -> f64 + Send + Sync> {
        FnWeight::new(1, |x: &[f64]| x[0] * x[0])
    }

    #[test]
    fn log_substitution_composes_exactly() {
        let g = FnWeight::new(2, |x: &[f64]| x[0] * x[1]);
        let v = log_substitute(&g, &[2f64.ln(), 3f64.ln()]).unwrap();
        assert!((v - 6.0).abs() < 1e-14);
        assert!(matches!(
            log_substitute(&g, &[0.0, 1000.0]),
            Err(Error::ExpOverflow { coordinate: 1, .. })
        ));
    }

    #[test]
    fn conjugate_of_square_after_substitution() {
        let cfg = SearchConfig::default();
        let v = discrete_log_conjugate(&square(), &[2.0], &cfg).unwrap();
        assert!((v.to_f64() + 1.0).abs() < 1e-10);
        assert_eq!(
            discrete_log_conjugate(&square(), &[0.0], &cfg).unwrap(),
            ExtendedReal::Finite(0.0)
        );
        assert_eq!(
            discrete_log_conjugate(&square(), &[-1.0], &cfg).unwrap(),
            ExtendedReal::PosInf
        );
    }

    #[test]
    fn table_matches_closed_form() {
        let table = lattice_conjugate_table(&square(), 20, &SearchConfig::default()).unwrap();
        for (a, v) in table.iter() {
            let k = a.components()[0] as f64;
            let exact = if k == 0.0 {
                0.0
            } else {
                0.5 * k * (0.5 * k).ln() - 0.5 * k
            };
            assert!((v - exact).abs() < 1e-9, "{a}: {v} vs {exact}");
        }
        let growth = table.ray_growth();
        assert!(growth.convex && growth.slopes_nondecreasing);
    }

    #[test]
    fn series_zero_terms_is_single_term() {
        let r = series_partial_sums(
            &square(),
            1.0,
            SeriesMode::Factorial,
            0,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(r.partial_sums, vec![1.0]);
    }
}
