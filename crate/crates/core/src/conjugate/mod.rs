//! Young-Fenchel conjugation of sampled and closed-form functions.
//!
//! Grid conjugates are the maximum of `⟨x, y⟩ - f(y)` over sample nodes and so
//! are lower bounds for the conjugate of any function interpolating the
//! samples. Conjugates of weights after the substitution `t ↦ g(e^t)` are
//! computed by bracketed continuous maximization instead.

mod brute;
mod duality;
mod fast;
pub mod lemmas;
mod log;

pub use brute::{brute_conjugate, brute_conjugate_with_witness, Witnessed};
pub use duality::{duality_gap, duality_sum, log_entropy, AdaptiveConjugate};
pub use fast::{biconjugate, conjugate_nd, fast_conjugate_1d, slope_dual_axes};
pub use log::{
    discrete_log_conjugate, lattice_conjugate_table, log_substitute, series_partial_sums,
    LatticeTable, RayGrowth, SeriesMode, SeriesReport,
};

use crate::numerics::sum::CompensatedSum;

/// `⟨x, y⟩ - fy` with exact products and compensated accumulation, so the
/// result does not depend on how callers group the terms.
pub(crate) fn affine_gap(x: &[f64], y: &[f64], fy: f64) -> f64 {
    let mut s = CompensatedSum::new();
    for (&a, &b) in x.iter().zip(y) {
        let p = a * b;
        s.add(p);
        s.add(a.mul_add(b, -p));
    }
    s.add(-fy);
    s.value()
}
