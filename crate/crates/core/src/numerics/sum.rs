//! Compensated summation.

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// `⟨a, b⟩` with exact products (via fused multiply-add) and compensated accumulation.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = CompensatedSum::new();
    for (&x, &y) in a.iter().zip(b) {
        let p = x * y;
        s.add(p);
        s.add(x.mul_add(y, -p));
    }
    s.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
        assert_ne!(v.iter().sum::<f64>(), 2.0);
    }

    #[test]
    fn dot_is_order_independent_on_cancellation() {
        let a = [1e8, 1.0, -1e8];
        let b = [1e8 + 1.0, 3.0, 1e8];
        assert_eq!(dot(&a, &b), 1e8 + 3.0);
    }
}
