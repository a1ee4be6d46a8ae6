//! The factorial inequality `(m₁+m₂)! ≤ e^{m₁+m₂} m₁! m₂!` in exact arithmetic.

use num_bigint::BigUint;
use serde::Serialize;

use crate::multi_index::factorial_big;

/// Extra Taylor terms of `e^k` beyond `k` used as the certificate.
const EXTRA_TERMS: u32 = 20;

/// Whether `C(m₁+m₂, m₁) ≤ Σ_{j≤J} k^j/j!` with `k = m₁+m₂`, checked after
/// multiplying through by `J!`. The partial sum is below `e^k`, so `true`
/// certifies the inequality.
pub fn stirling_certified(m1: u32, m2: u32) -> bool {
    let k = m1 + m2;
    let terms = k + EXTRA_TERMS;
    let binom = factorial_big(k) / (factorial_big(m1) * factorial_big(m2));
    let kb = BigUint::from(k);
    // Σ_j k^j · J!/j!, accumulated from j = J down to 0.
    let mut rhs = BigUint::from(0u32);
    let mut falling = BigUint::from(1u32);
    let mut power = vec![BigUint::from(1u32)];
    for _ in 0..terms {
        let next = power.last().unwrap() * &kb;
        power.push(next);
    }
    for j in (0..=terms).rev() {
        rhs += &power[j as usize] * &falling;
        falling *= BigUint::from(j.max(1));
    }
    binom * factorial_big(terms) <= rhs
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StirlingReport {
    pub limit: u32,
    pub checked: usize,
    /// Pairs `(m₁, m₂)` without a certificate.
    pub failures: Vec<(u32, u32)>,
    pub passed: bool,
}

/// Certifies every pair `m₁, m₂ ≤ limit`.
pub fn verify_stirling(limit: u32) -> StirlingReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    for m1 in 0..=limit {
        for m2 in 0..=limit {
            checked += 1;
            if !stirling_certified(m1, m2) {
                failures.push((m1, m2));
            }
        }
    }
    StirlingReport {
        limit,
        checked,
        passed: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_pairs() {
        assert!(stirling_certified(0, 0));
        assert!(stirling_certified(1, 0));
        assert!(stirling_certified(20, 20));
    }

    #[test]
    fn full_square_up_to_twenty() {
        let r = verify_stirling(20);
        assert_eq!(r.checked, 441);
        assert!(r.passed, "{:?}", r.failures);
    }
}
