//! Multi-indices `α ∈ Z₊ⁿ`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Largest modulus for which [`MultiIndex::factorial_exact`] is provided.
pub const EXACT_FACTORIAL_LIMIT: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `k·e_j` in `n` dimensions.
    pub fn unit(n: usize, j: usize, k: u32) -> Self {
        let mut c = vec![0; n];
        c[j] = k;
        MultiIndex(c)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ αⱼ`.
    pub fn modulus(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π αⱼ!` in exact integer arithmetic; `None` when `|α|` exceeds
    /// [`EXACT_FACTORIAL_LIMIT`].
    pub fn factorial_exact(&self) -> Option<BigUint> {
        if self.modulus() > EXACT_FACTORIAL_LIMIT {
            return None;
        }
        Some(self.0.iter().map(|&a| factorial_big(a)).product())
    }

    /// `ln α!`: exact integer factorial rounded once for small indices,
    /// a sum of logarithms beyond.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&a| ln_factorial(a)).sum()
    }

    pub fn factorial(&self) -> f64 {
        self.ln_factorial().exp()
    }

    /// Componentwise partial order `α ≤ β`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `β − α`, or `None` unless `α ≤ β`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if other.le(self) {
            Some(MultiIndex(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    /// `x^α`.
    pub fn pow(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, &v)| v.powi(a as i32))
            .product()
    }

    /// `ln |x^α|`, `-inf` when a used coordinate is zero.
    pub fn ln_abs_pow(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&a, _)| a > 0)
            .map(|(&a, &v)| a as f64 * v.abs().ln())
            .sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&a| a as f64).collect()
    }

    /// All indices with `|α| = k` in `n` dimensions, lexicographically descending
    /// in the first component (so `(k,0,..)` comes first).
    pub fn shell(n: usize, k: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fill_shell(n, 0, k, &mut cur, &mut out);
        out
    }

    /// All indices with `|α| ≤ bound`, shell by shell.
    pub fn up_to(n: usize, bound: u32) -> Vec<MultiIndex> {
        (0..=bound).flat_map(|k| MultiIndex::shell(n, k)).collect()
    }

    /// All `j` with `0 ≤ j ≤ self`.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.dim()))];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=a).map(move |v| {
                        let mut c = m.0.clone();
                        c.push(v);
                        MultiIndex(c)
                    })
                })
                .collect();
        }
        out
    }
}

fn fill_shell(n: usize, pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos + 1 == n {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for v in (0..=remaining).rev() {
        cur[pos] = v;
        fill_shell(n, pos + 1, remaining - v, cur, out);
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn factorial_big(k: u32) -> BigUint {
    (1..=k).map(BigUint::from).product()
}

const LN_FACTORIAL_TABLE: usize = 1024;

/// `ln k!`. Entries up to [`EXACT_FACTORIAL_LIMIT`] come from the exact
/// integer factorial; later ones add logarithms term by term.
pub fn ln_factorial(k: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        for j in 0..=EXACT_FACTORIAL_LIMIT {
            t.push(factorial_big(j).to_f64().map_or(f64::INFINITY, f64::ln));
        }
        for j in EXACT_FACTORIAL_LIMIT + 1..LN_FACTORIAL_TABLE as u32 {
            let prev = t[j as usize - 1];
            t.push(prev + (j as f64).ln());
        }
        t
    });
    match table.get(k as usize) {
        Some(&v) => v,
        None => {
            table[LN_FACTORIAL_TABLE - 1]
                + (LN_FACTORIAL_TABLE as u32..=k)
                    .map(|j| (j as f64).ln())
                    .sum::<f64>()
        }
    }
}

/// Binomial coefficient `C(β, α) = Π C(βⱼ, αⱼ)` as a float.
pub fn binomial(beta: &MultiIndex, alpha: &MultiIndex) -> f64 {
    if !alpha.le(beta) {
        return 0.0;
    }
    (beta.ln_factorial() - alpha.ln_factorial() - beta.checked_sub(alpha).unwrap().ln_factorial())
        .exp()
        .round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_and_modulus() {
        let a = MultiIndex::new(vec![3, 0, 2]);
        assert_eq!(a.modulus(), 5);
        assert_eq!(a.factorial_exact().unwrap(), BigUint::from(12u32));
        assert!((a.factorial() - 12.0).abs() < 1e-12);
        let big = MultiIndex::new(vec![41]);
        assert!(big.factorial_exact().is_none());
        assert!((big.ln_factorial() - ln_factorial(40) - 41f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn exact_factorial_at_limit() {
        let a = MultiIndex::new(vec![40]);
        assert_eq!(
            a.factorial_exact().unwrap().to_string(),
            "815915283247897734345611269596115894272000000000"
        );
    }

    #[test]
    fn shells_have_expected_sizes() {
        assert_eq!(MultiIndex::shell(1, 7).len(), 1);
        assert_eq!(MultiIndex::shell(2, 4).len(), 5);
        assert_eq!(MultiIndex::shell(3, 3).len(), 10);
        assert_eq!(MultiIndex::up_to(2, 3).len(), 10);
        assert!(MultiIndex::shell(3, 5).iter().all(|a| a.modulus() == 5));
    }

    #[test]
    fn partial_order_and_below() {
        let b = MultiIndex::new(vec![2, 1]);
        let below = b.below();
        assert_eq!(below.len(), 6);
        assert!(below.iter().all(|j| j.le(&b)));
        assert!(!MultiIndex::new(vec![3, 0]).le(&b));
        assert_eq!(binomial(&b, &MultiIndex::new(vec![1, 1])), 2.0);
    }
}
