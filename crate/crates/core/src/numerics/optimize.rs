//! Bracketed maximization: a coarse scan over a box that doubles until the
//! maximizer recedes from its edges, followed by coordinate-wise golden-section
//! refinement.

use crate::error::{Error, Result};
use crate::grid::uniform_axis;

/// Range of one search coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// The whole real line; the box is `[-w, w]`.
    Line,
    /// `[0, ∞)`; the box is `[0, w]` and the lower edge is part of the domain.
    HalfLine,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub initial_half_width: f64,
    pub max_doublings: u32,
    /// Width at which golden-section refinement stops.
    pub tol: f64,
    pub max_cycles: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            initial_half_width: 4.0,
            max_doublings: 60,
            tol: 1e-10,
            max_cycles: 400,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Maximum {
    pub point: Vec<f64>,
    pub value: f64,
    /// Number of box doublings that were needed.
    pub doublings: u32,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// The endpoints are compared at the end, so a maximum on the boundary is
/// returned exactly.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let fa = sanitize(f(a));
    if b <= a {
        return (a, fa);
    }
    let fb = sanitize(f(b));
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = sanitize(f(x1));
    let mut f2 = sanitize(f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            if x1 == x2 {
                break;
            }
            f1 = sanitize(f(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            if x1 == x2 {
                break;
            }
            f2 = sanitize(f(x2));
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if fa >= best.1 {
        best = (a, fa);
    }
    if fb > best.1 {
        best = (b, fb);
    }
    best
}

fn scan_nodes(n: usize) -> usize {
    match n {
        1 => 65,
        2 => 17,
        _ => 9,
    }
}

fn coarse_scan<F: FnMut(&[f64]) -> f64>(f: &mut F, axes: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = axes.len();
    let lens: Vec<usize> = axes.iter().map(Vec::len).collect();
    let total: usize = lens.iter().product();
    let mut idx = vec![0usize; n];
    let mut point = vec![0.0; n];
    let mut best = (Vec::new(), f64::NEG_INFINITY);
    for _ in 0..total {
        for k in 0..n {
            point[k] = axes[k][idx[k]];
        }
        let v = sanitize(f(&point));
        if best.0.is_empty() || v > best.1 {
            best = (point.clone(), v);
        }
        for k in (0..n).rev() {
            idx[k] += 1;
            if idx[k] < lens[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    best
}

/// Coordinate-wise golden-section ascent from `start`, each coordinate kept
/// within `radius` of its starting value and inside `[lo, hi]`. Never returns
/// a value below `f(start)`.
pub fn local_refine<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    radius: &[f64],
    lo: &[f64],
    hi: &[f64],
    cfg: &SearchConfig,
) -> Maximum {
    let mut point = start.to_vec();
    let mut value = sanitize(f(&point));
    for _ in 0..cfg.max_cycles {
        let before = value;
        for j in 0..point.len() {
            let a = (start[j] - radius[j]).max(lo[j]);
            let b = (start[j] + radius[j]).min(hi[j]);
            let mut probe = point.clone();
            let (xj, vj) = golden_section_max(
                |s| {
                    probe[j] = s;
                    f(&probe)
                },
                a,
                b,
                cfg.tol,
            );
            if vj > value {
                point[j] = xj;
                value = vj;
            }
        }
        if value - before <= 1e-15 * value.abs().max(1.0) {
            break;
        }
    }
    Maximum {
        point,
        value,
        doublings: 0,
    }
}

/// Maximizes `f` over the product of `domains`.
///
/// The search box starts at `initial_half_width` and doubles whenever the
/// refined maximizer lies in the outer eighth of the box along an open edge.
pub fn maximize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    domains: &[Domain],
    cfg: &SearchConfig,
) -> Result<Maximum> {
    let n = domains.len();
    if n == 0 {
        return Ok(Maximum {
            point: Vec::new(),
            value: sanitize(f(&[])),
            doublings: 0,
        });
    }
    let mut w = cfg.initial_half_width;
    for doublings in 0..=cfg.max_doublings {
        let bounds: Vec<(f64, f64)> = domains
            .iter()
            .map(|d| match d {
                Domain::Line => (-w, w),
                Domain::HalfLine => (0.0, w),
            })
            .collect();
        let axes: Vec<Vec<f64>> = bounds
            .iter()
            .map(|&(lo, hi)| uniform_axis(lo, hi, scan_nodes(n)))
            .collect();
        let (mut point, mut value) = coarse_scan(&mut f, &axes);
        if value == f64::NEG_INFINITY {
            w *= 2.0;
            continue;
        }
        let cycles = if n == 1 { 1 } else { cfg.max_cycles };
        for _ in 0..cycles {
            let start = value;
            let mut moved: f64 = 0.0;
            for j in 0..n {
                let (lo, hi) = bounds[j];
                let mut probe = point.clone();
                let (xj, vj) = golden_section_max(
                    |s| {
                        probe[j] = s;
                        f(&probe)
                    },
                    lo,
                    hi,
                    cfg.tol,
                );
                if vj > value {
                    moved = moved.max((xj - point[j]).abs());
                    point[j] = xj;
                    value = vj;
                }
            }
            let gain = value - start;
            if moved <= cfg.tol || gain <= 1e-15 * value.abs().max(1.0) {
                break;
            }
        }
        let near_edge = domains.iter().zip(&point).any(|(d, &p)| match d {
            Domain::Line => p.abs() > 0.875 * w,
            Domain::HalfLine => p > 0.875 * w,
        });
        if !near_edge {
            return Ok(Maximum {
                point,
                value,
                doublings,
            });
        }
        w *= 2.0;
    }
    Err(Error::NotLocalized(cfg.max_doublings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_section_max(|x| -(x - 0.3) * (x - 0.3), -2.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn golden_section_returns_boundary_exactly() {
        let (x, v) = golden_section_max(|x| -x, 0.0, 4.0, 1e-10);
        assert_eq!(x, 0.0);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn maximize_expands_the_box() {
        let m = maximize(
            |p| -(p[0] - 100.0).powi(2),
            &[Domain::Line],
            &SearchConfig::default(),
        )
        .unwrap();
        assert!((m.point[0] - 100.0).abs() < 1e-6);
        assert!(m.doublings >= 5);
    }

    #[test]
    fn maximize_two_dimensional_concave() {
        let f = |p: &[f64]| 2.0 * p[0] + p[1] - (2.0 * p[0]).exp() - p[1].exp();
        let m = maximize(f, &[Domain::Line, Domain::Line], &SearchConfig::default()).unwrap();
        assert!((m.value + 2.0).abs() < 1e-10, "{}", m.value);
    }

    #[test]
    fn unbounded_objective_is_reported() {
        let cfg = SearchConfig {
            max_doublings: 5,
            ..SearchConfig::default()
        };
        let err = maximize(|p| p[0], &[Domain::Line], &cfg).unwrap_err();
        assert!(matches!(err, Error::NotLocalized(5)));
    }
}
