//! Surface area of the unit sphere.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceConstant {
    pub n: usize,
    pub s_n: f64,
}

/// `s_n = 2π^{n/2} / Γ(n/2)` for `1 ≤ n ≤ 3`.
pub fn surface_constant(n: usize) -> Result<SurfaceConstant> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let s_n = 2.0 * PI.powf(n as f64 / 2.0) / half_gamma(n as u32);
    Ok(SurfaceConstant { n, s_n })
}

/// `Γ(k/2)` for `k ≥ 1`, by the recurrence from `Γ(1/2) = √π` and `Γ(1) = 1`.
pub(crate) fn half_gamma(k: u32) -> f64 {
    assert!(k > 0, "Γ has a pole at 0");
    let (mut g, mut j) = if k % 2 == 1 { (PI.sqrt(), 1) } else { (1.0, 2) };
    while j < k {
        g *= j as f64 / 2.0;
        j += 2;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_dimensional_spheres() {
        assert_eq!(surface_constant(1).unwrap().s_n, 2.0);
        assert!((surface_constant(2).unwrap().s_n - 2.0 * PI).abs() < 1e-15);
        assert!((surface_constant(3).unwrap().s_n - 4.0 * PI).abs() < 1e-14);
        assert!(surface_constant(0).is_err());
        assert!(surface_constant(4).is_err());
    }

    #[test]
    fn half_integer_gamma() {
        assert_eq!(half_gamma(2), 1.0);
        assert_eq!(half_gamma(6), 2.0);
        assert!((half_gamma(3) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((half_gamma(7) - 15.0 * PI.sqrt() / 8.0).abs() < 1e-14);
    }
}
