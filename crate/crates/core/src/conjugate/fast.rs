use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::grid::{uniform_axis, validate_axes, GridFunction, MAX_DIM};

use super::affine_gap;

/// Lower convex hull of the finite samples, as indices into `ys`.
fn lower_hull(ys: &[f64], fs: &[Option<f64>]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (i, fi) in fs.iter().enumerate() {
        let Some(fi) = *fi else { continue };
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let (fa, fb) = (fs[a].unwrap(), fs[b].unwrap());
            let cross = (ys[b] - ys[a]) * (fi - fa) - (fb - fa) * (ys[i] - ys[a]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Linear-time discrete Legendre transform of samples `(ys, fs)` at sorted
/// dual points. `None` in `fs` stands for `+inf`; `None` is returned when every
/// sample is `+inf` (the conjugate is then identically `-inf`).
pub(crate) fn legendre_1d(ys: &[f64], fs: &[Option<f64>], xs: &[f64]) -> Option<Vec<f64>> {
    let hull = lower_hull(ys, fs);
    if hull.is_empty() {
        return None;
    }
    let value = |k: usize, x: f64| affine_gap(&[x], &[ys[hull[k]]], fs[hull[k]].unwrap());
    let mut k = 0;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        while k + 1 < hull.len() && value(k + 1, x) >= value(k, x) {
            k += 1;
        }
        let mut best = value(k, x);
        if k > 0 {
            best = best.max(value(k - 1, x));
        }
        if k + 1 < hull.len() {
            best = best.max(value(k + 1, x));
        }
        out.push(best);
    }
    Some(out)
}

/// Conjugate of one-dimensional samples at increasing dual points in
/// `O(N + M)` after the hull pass.
pub fn fast_conjugate_1d(f: &GridFunction, duals: &[f64]) -> Result<Vec<ExtendedReal>> {
    if f.dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "fast_conjugate_1d needs a 1-dimensional grid, got {}",
            f.dim()
        )));
    }
    if duals.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("dual points must be finite".into()));
    }
    if duals.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::UnsortedDuals);
    }
    let fs: Vec<Option<f64>> = f.values().iter().map(|v| v.finite()).collect();
    let out = legendre_1d(f.axis(0), &fs, duals).ok_or(Error::IdenticallyInfinite)?;
    Ok(out.into_iter().map(ExtendedReal::Finite).collect())
}

/// Conjugate on the product grid `dual_axes` by iterated one-dimensional
/// transforms: the first pass conjugates along axis 0 for every fixed tail,
/// each later pass conjugates the negated partial result along the next axis.
pub fn conjugate_nd(f: &GridFunction, dual_axes: &[Vec<f64>]) -> Result<GridFunction> {
    let d = f.dim();
    if d > MAX_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    if dual_axes.len() != d {
        return Err(Error::InvalidArgument(format!(
            "{} dual axes for a {d}-dimensional grid",
            dual_axes.len()
        )));
    }
    validate_axes(dual_axes)?;
    let mut shape = f.shape();
    // `h` holds the function being conjugated in the current pass; `None` is `+inf`.
    let mut h: Vec<Option<f64>> = f.values().iter().map(|v| v.finite()).collect();
    let mut g: Vec<Option<f64>> = Vec::new();
    for k in 0..d {
        let inner: usize = shape[k + 1..].iter().product();
        let outer: usize = shape[..k].iter().product();
        let (n_in, n_out) = (shape[k], dual_axes[k].len());
        g = vec![None; outer * n_out * inner];
        let ys = f.axis(k);
        let mut fiber = vec![None; n_in];
        for o in 0..outer {
            for i in 0..inner {
                for (j, slot) in fiber.iter_mut().enumerate() {
                    *slot = h[(o * n_in + j) * inner + i];
                }
                if let Some(vals) = legendre_1d(ys, &fiber, &dual_axes[k]) {
                    for (j, v) in vals.into_iter().enumerate() {
                        g[(o * n_out + j) * inner + i] = Some(v);
                    }
                }
            }
        }
        shape[k] = n_out;
        h = g.iter().map(|v| v.map(|x| -x)).collect();
    }
    let values = g
        .into_iter()
        .map(|v| {
            v.map(ExtendedReal::Finite)
                .ok_or(Error::IdenticallyInfinite)
        })
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(dual_axes.to_vec(), values)
}

/// Per-axis dual grids spanning the range of finite-difference slopes of `f`,
/// with as many nodes as the corresponding primal axis.
pub fn slope_dual_axes(f: &GridFunction) -> Vec<Vec<f64>> {
    let shape = f.shape();
    (0..f.dim())
        .map(|k| {
            let inner: usize = shape[k + 1..].iter().product();
            let ys = f.axis(k);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for flat in 0..f.len() {
                let idx = f.grid_index(flat);
                if idx[k] + 1 >= shape[k] {
                    continue;
                }
                if let (Some(a), Some(b)) = (f.value(flat).finite(), f.value(flat + inner).finite())
                {
                    let s = (b - a) / (ys[idx[k] + 1] - ys[idx[k]]);
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
            }
            if !(lo.is_finite() && hi.is_finite()) {
                lo = 0.0;
                hi = 0.0;
            }
            if hi - lo < 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
                lo -= 0.5;
                hi += 0.5;
            }
            uniform_axis(lo, hi, shape[k])
        })
        .collect()
}

/// `f**` on the grid of `f`, through the dual grid of [`slope_dual_axes`].
pub fn biconjugate(f: &GridFunction) -> Result<GridFunction> {
    let fstar = conjugate_nd(f, &slope_dual_axes(f))?;
    conjugate_nd(&fstar, f.axes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate::brute_conjugate;

    #[test]
    fn abs_value_conjugate_vanishes_inside_unit_interval() {
        let f = GridFunction::from_fn(vec![uniform_axis(-2.0, 2.0, 401)], |y| y[0].abs()).unwrap();
        let v = fast_conjugate_1d(&f, &[-0.5, 0.0, 0.5]).unwrap();
        for x in v {
            assert!(x.to_f64().abs() < 1e-12);
        }
    }

    #[test]
    fn unsorted_duals_are_rejected() {
        let f = GridFunction::from_fn(vec![uniform_axis(-1.0, 1.0, 5)], |y| y[0] * y[0]).unwrap();
        assert!(matches!(
            fast_conjugate_1d(&f, &[1.0, 0.0]),
            Err(Error::UnsortedDuals)
        ));
    }

    #[test]
    fn infinite_samples_are_skipped() {
        let axis = uniform_axis(-2.0, 2.0, 41);
        let values = axis
            .iter()
            .map(|&y| {
                if y < 0.0 {
                    ExtendedReal::PosInf
                } else {
                    ExtendedReal::Finite(y * y)
                }
            })
            .collect();
        let f = GridFunction::new(vec![axis], values).unwrap();
        let duals = uniform_axis(-3.0, 3.0, 13);
        let fast = fast_conjugate_1d(&f, &duals).unwrap();
        let pts: Vec<Vec<f64>> = duals.iter().map(|&x| vec![x]).collect();
        let brute = brute_conjugate(&f, &pts).unwrap();
        for (a, b) in fast.iter().zip(&brute) {
            assert!((a.to_f64() - b.to_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_quadratic_in_two_dimensions() {
        let axis = uniform_axis(-4.0, 4.0, 161);
        let f = GridFunction::from_fn(vec![axis.clone(), axis], |y| {
            0.5 * (y[0] * y[0] + y[1] * y[1])
        })
        .unwrap();
        let dual = uniform_axis(-2.0, 2.0, 9);
        let g = conjugate_nd(&f, &[dual.clone(), dual]).unwrap();
        for (x, v) in g.iter() {
            assert!((v.to_f64() - 0.5 * (x[0] * x[0] + x[1] * x[1])).abs() < 1e-5);
        }
    }

    #[test]
    fn concave_wedge_convexifies_to_chord() {
        let f = GridFunction::from_fn(vec![uniform_axis(-2.0, 2.0, 41)], |y| -y[0].abs()).unwrap();
        let g = biconjugate(&f).unwrap();
        for (_, v) in g.iter() {
            assert!((v.to_f64() + 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dual_axis_count_must_match() {
        let a = uniform_axis(0.0, 1.0, 2);
        let f = GridFunction::new(vec![a.clone(); 3], vec![ExtendedReal::Finite(0.0); 8]).unwrap();
        assert!(conjugate_nd(&f, &[a.clone(), a.clone()]).is_err());
    }
}
