//! Sampled extended-real functions on rectangular grids in up to three dimensions.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

pub const MAX_DIM: usize = 3;

/// Uniform axis with `n` nodes on `[lo, hi]`.
///
/// Nodes are computed as `((n-1-i)*lo + i*hi)/(n-1)`, so both endpoints are
/// hit exactly and a symmetric axis with odd `n` contains `0.0` exactly.
pub fn uniform_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let d = (n - 1) as f64;
            (0..n)
                .map(|i| ((n - 1 - i) as f64 * lo + i as f64 * hi) / d)
                .collect()
        }
    }
}

/// Uniform axis on `[center - half, center + half]` with the center node reproduced exactly.
pub(crate) fn centered_axis(center: f64, half: f64, n: usize) -> Vec<f64> {
    uniform_axis(-half, half, n)
        .into_iter()
        .map(|v| center + v)
        .collect()
}

/// An extended-real valued function sampled on the product of strictly
/// increasing axes. Values are stored in row-major order: the last axis varies
/// fastest, so flat order equals lexicographic order of grid indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    axes: Vec<Vec<f64>>,
    values: Vec<ExtendedReal>,
}

impl GridFunction {
    pub fn new(axes: Vec<Vec<f64>>, values: Vec<ExtendedReal>) -> Result<Self> {
        validate_axes(&axes)?;
        let len: usize = axes.iter().map(Vec::len).product();
        if values.len() != len {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match grid size {len}",
                values.len()
            )));
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::IdenticallyInfinite);
        }
        if values
            .iter()
            .any(|v| matches!(v, ExtendedReal::Finite(x) if !x.is_finite()))
        {
            return Err(Error::InvalidGrid("non-finite value tagged finite".into()));
        }
        Ok(GridFunction { axes, values })
    }

    /// Samples `f` at every node. `+inf` results become [`ExtendedReal::PosInf`];
    /// NaN or `-inf` are rejected.
    pub fn from_fn<F>(axes: Vec<Vec<f64>>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        validate_axes(&axes)?;
        let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
        let len: usize = shape.iter().product();
        let mut values = Vec::with_capacity(len);
        let mut point = vec![0.0; axes.len()];
        for flat in 0..len {
            fill_point(&axes, &shape, flat, &mut point);
            values.push(ExtendedReal::try_from_f64(f(&point)).map_err(|_| {
                Error::InvalidGrid(format!("sampled value at {point:?} is NaN or -inf"))
            })?);
        }
        GridFunction::new(axes, values)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &[f64] {
        &self.axes[k]
    }

    pub fn values(&self) -> &[ExtendedReal] {
        &self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid index of a flat position.
    pub fn grid_index(&self, flat: usize) -> Vec<usize> {
        let shape = self.shape();
        let mut idx = vec![0; shape.len()];
        let mut rem = flat;
        for k in (0..shape.len()).rev() {
            idx[k] = rem % shape[k];
            rem /= shape[k];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, axis)| acc * axis.len() + i)
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.dim()];
        fill_point(&self.axes, &self.shape(), flat, &mut p);
        p
    }

    pub fn value(&self, flat: usize) -> ExtendedReal {
        self.values[flat]
    }

    pub fn value_at(&self, idx: &[usize]) -> ExtendedReal {
        self.values[self.flat_index(idx)]
    }

    /// Largest spacing along each axis.
    pub fn mesh_widths(&self) -> Vec<f64> {
        self.axes
            .iter()
            .map(|a| a.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max))
            .collect()
    }

    /// True if the node lies on a face of the grid box.
    pub fn on_boundary(&self, flat: usize) -> bool {
        self.grid_index(flat)
            .iter()
            .zip(&self.axes)
            .any(|(&i, a)| i == 0 || i + 1 == a.len())
    }

    /// Iterates `(node, value)` pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<f64>, ExtendedReal)> + '_ {
        (0..self.len()).map(move |i| (self.node(i), self.values[i]))
    }

    pub fn to_csv(&self) -> String {
        let lens: Vec<String> = self.axes.iter().map(|a| a.len().to_string()).collect();
        let mut out = format!("# axes: {}; lens: {}\n", self.dim(), lens.join(","));
        for (node, v) in self.iter() {
            for c in &node {
                let _ = write!(out, "{c},");
            }
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty grid file".into()))?;
        let (dim, lens) = parse_header(header)?;
        let total: usize = lens.iter().product();
        let mut axes: Vec<Vec<f64>> = lens.iter().map(|&l| Vec::with_capacity(l)).collect();
        let mut values = Vec::with_capacity(total);
        let mut stride = vec![1usize; dim];
        for k in (0..dim.saturating_sub(1)).rev() {
            stride[k] = stride[k + 1] * lens[k + 1];
        }
        for (row, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != dim + 1 {
                return Err(Error::Parse(format!(
                    "row {row}: expected {} fields, got {}",
                    dim + 1,
                    fields.len()
                )));
            }
            for k in 0..dim {
                let c: f64 = fields[k]
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {row}: bad coordinate")))?;
                let i = (row / stride[k]) % lens[k];
                if axes[k].len() == i {
                    axes[k].push(c);
                } else if axes[k].get(i) != Some(&c) {
                    return Err(Error::Parse(format!(
                        "row {row}: coordinate {c} inconsistent with axis {k}"
                    )));
                }
            }
            let v = match fields[dim] {
                "inf" | "+inf" => ExtendedReal::PosInf,
                s => {
                    let x: f64 = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("row {row}: bad value `{s}`")))?;
                    ExtendedReal::try_from_f64(x)?
                }
            };
            values.push(v);
        }
        if values.len() != total {
            return Err(Error::Parse(format!(
                "expected {total} rows, found {}",
                values.len()
            )));
        }
        GridFunction::new(axes, values)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        GridFunction::from_csv(&std::fs::read_to_string(path)?)
    }
}

fn parse_header(line: &str) -> Result<(usize, Vec<usize>)> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("header must start with `#`".into()))?;
    let mut dim = None;
    let mut lens = None;
    for part in body.split(';') {
        let (key, val) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad header field `{part}`")))?;
        match key.trim() {
            "axes" => {
                dim = Some(
                    val.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse("bad axis count".into()))?,
                )
            }
            "lens" => {
                lens = Some(
                    val.split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Error::Parse("bad axis lengths".into()))?,
                )
            }
            other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse("missing `axes`".into()))?;
    let lens = lens.ok_or_else(|| Error::Parse("missing `lens`".into()))?;
    if lens.len() != dim {
        return Err(Error::Parse("`lens` count differs from `axes`".into()));
    }
    Ok((dim, lens))
}

pub(crate) fn validate_axes(axes: &[Vec<f64>]) -> Result<()> {
    if axes.is_empty() || axes.len() > MAX_DIM {
        return Err(Error::UnsupportedDimension(axes.len()));
    }
    for (k, a) in axes.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::InvalidGrid(format!("axis {k} is empty")));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "axis {k} has a non-finite node"
            )));
        }
        if a.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "axis {k} is not strictly increasing"
            )));
        }
    }
    Ok(())
}

fn fill_point(axes: &[Vec<f64>], shape: &[usize], flat: usize, out: &mut [f64]) {
    let mut rem = flat;
    for k in (0..shape.len()).rev() {
        out[k] = axes[k][rem % shape[k]];
        rem /= shape[k];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_axis_contains_exact_zero() {
        let a = uniform_axis(-7.3, 7.3, 401);
        assert_eq!(a[200], 0.0);
        assert_eq!(a[0], -7.3);
        assert_eq!(a[400], 7.3);
        for i in 0..401 {
            assert_eq!(a[i], -a[400 - i]);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridFunction::new(vec![vec![0.0, 0.0]], vec![0.0.into(); 2]).is_err());
        assert!(GridFunction::new(vec![vec![0.0, 1.0]], vec![ExtendedReal::PosInf; 2]).is_err());
        assert!(GridFunction::new(vec![vec![0.0, 1.0]], vec![0.0.into(); 3]).is_err());
        assert!(GridFunction::new(vec![vec![0.0]; 4], vec![0.0.into()]).is_err());
        assert!(GridFunction::from_fn(vec![vec![0.0, 1.0]], |_| f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn flat_order_is_lexicographic() {
        let g = GridFunction::from_fn(vec![vec![0.0, 1.0], vec![10.0, 20.0, 30.0]], |p| {
            p[0] * 100.0 + p[1]
        })
        .unwrap();
        assert_eq!(g.node(4), vec![1.0, 20.0]);
        assert_eq!(g.grid_index(4), vec![1, 1]);
        assert_eq!(g.flat_index(&[1, 2]), 5);
        assert_eq!(g.value(5), ExtendedReal::Finite(130.0));
    }

    #[test]
    fn csv_header_and_infinity() {
        let g = GridFunction::new(
            vec![vec![0.0, 0.5], vec![-1.0, 1.0]],
            vec![1.0.into(), ExtendedReal::PosInf, 2.5.into(), (-3.0).into()],
        )
        .unwrap();
        let csv = g.to_csv();
        assert!(csv.starts_with("# axes: 2; lens: 2,2\n"));
        assert!(csv.contains("0,1,inf\n"));
        assert_eq!(GridFunction::from_csv(&csv).unwrap(), g);
    }

    #[test]
    fn csv_rejects_truncated_input() {
        assert!(GridFunction::from_csv("# axes: 1; lens: 3\n0,1\n1,2\n").is_err());
        assert!(GridFunction::from_csv("axes: 1; lens: 1\n0,1\n").is_err());
    }
}
