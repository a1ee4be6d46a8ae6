use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;

use super::TestFunction;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaylorValue {
    pub re: f64,
    pub im: f64,
    /// Larger of the last two shell masses `Σ_{|α|=k} |D^α f(x) y^α| / α!`.
    pub error_estimate: f64,
    pub shell_masses: Vec<f64>,
    /// The last two shells are lighter than the two before them.
    pub decaying: bool,
}

impl TaylorValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Largest supported order in one dimension and in several.
pub const MAX_TAYLOR_ORDER_1D: u32 = 40;
pub const MAX_TAYLOR_ORDER_ND: u32 = 24;

/// `Σ_{|α| ≤ order} D^α f(x) (iy)^α / α!`, the expansion of `f(x + iy)`
/// about the real point `x`.
pub fn taylor_extend(f: &TestFunction, x: &[f64], y: &[f64], order: u32) -> Result<TaylorValue> {
    let n = f.dim();
    if x.len() != n || y.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected points of dimension {n}"
        )));
    }
    let cap = if n == 1 {
        MAX_TAYLOR_ORDER_1D
    } else {
        MAX_TAYLOR_ORDER_ND
    };
    if order > cap {
        return Err(Error::InvalidArgument(format!(
            "taylor order {order} exceeds {cap} in dimension {n}"
        )));
    }
    let k = order as usize;
    // D^k f_j(x_j) (i y_j)^k / k! per axis.
    let coeff: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let d = f.factor_derivatives(j, x[j], k);
            let mut p = Complex64::new(1.0, 0.0);
            let iy = Complex64::new(0.0, y[j]);
            d.iter()
                .enumerate()
                .map(|(q, &dq)| {
                    if q > 0 {
                        p = p * iy / q as f64;
                    }
                    p * dq
                })
                .collect()
        })
        .collect();
    let mut shell_masses = vec![0.0; k + 1];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for alpha in MultiIndex::up_to(n, order) {
        let term = alpha
            .components()
            .iter()
            .enumerate()
            .fold(Complex64::new(f.scale(), 0.0), |acc, (j, &a)| {
                acc * coeff[j][a as usize]
            });
        shell_masses[alpha.modulus() as usize] += term.norm();
        let t = sum + term;
        comp += if sum.norm() >= term.norm() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    let sum = sum + comp;
    let last = |i: usize| shell_masses.get(i).copied().unwrap_or(0.0);
    let error_estimate = if k == 0 {
        0.0
    } else {
        last(k).max(last(k - 1))
    };
    let decaying = k < 3 || error_estimate < last(k - 2).max(last(k - 3)) || error_estimate == 0.0;
    Ok(TaylorValue {
        re: sum.re,
        im: sum.im,
        error_estimate,
        shell_masses,
        decaying,
    })
}
