//! Deterministic parallel maxima over enumerated candidates.

use rayon::prelude::*;

/// Largest `f(i)` over `0..total` with its index. NaN is skipped; ties go
/// to the smallest index, so the result does not depend on scheduling.
/// `None` when every value is NaN or `-inf`.
pub fn par_argmax<F: Fn(usize) -> f64 + Sync>(total: usize, f: F) -> Option<(f64, usize)> {
    let (v, i) = (0..total)
        .into_par_iter()
        .map(|i| {
            let v = f(i);
            (if v.is_nan() { f64::NEG_INFINITY } else { v }, i)
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), pick);
    (i != usize::MAX && v > f64::NEG_INFINITY).then_some((v, i))
}

fn pick(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Row-major decoding of a flat index over `n` axes of length `m`.
pub fn decode(flat: usize, m: usize, n: usize, out: &mut [usize]) {
    let mut r = flat;
    for k in (0..n).rev() {
        out[k] = r % m;
        r /= m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_and_nan() {
        assert_eq!(
            par_argmax(5, |i| if i == 1 { f64::NAN } else { 1.0 }),
            Some((1.0, 0))
        );
        assert_eq!(par_argmax(4, |i| i as f64 % 2.0), Some((1.0, 1)));
        assert_eq!(par_argmax(3, |_| f64::NEG_INFINITY), None);
    }
}
