use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, MAX_DIM};
use crate::numerics::sum::CompensatedSum;

use super::mollifier::TensorRule;
use super::{Profile, Weight};

pub type WeightFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Smoothness {
    C0,
    C2,
    CInf,
}

#[derive(Clone)]
pub enum WeightForm {
    /// `Ω(scale·‖x‖)`
    Radial { profile: Profile, scale: f64 },
    /// `Σⱼ Ω(scale·|xⱼ|)`
    Separable { profile: Profile, scale: f64 },
    /// `Ω(‖x‖₁ + shift)`
    Shifted { profile: Profile, shift: f64 },
    /// Multilinear interpolation of samples over `[0, R]ⁿ`, evaluated at `|x|`.
    Sampled(GridFunction),
    /// `x ↦ ∫ φ(x + ξ) ω(ξ) dξ` by a fixed tensor rule.
    Mollified {
        base: Arc<WeightFunction>,
        rule: Arc<TensorRule>,
    },
    Custom {
        name: String,
        f: WeightFn,
    },
}

/// A weight on `ℝⁿ` with its construction and smoothness class.
#[derive(Clone)]
pub struct WeightFunction {
    dim: usize,
    smoothness: Smoothness,
    form: WeightForm,
}

impl WeightFunction {
    fn checked(dim: usize, smoothness: Smoothness, form: WeightForm) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(WeightFunction {
            dim,
            smoothness,
            form,
        })
    }

    pub fn radial(profile: Profile, scale: f64, dim: usize) -> Result<Self> {
        let s = profile.radial_smoothness();
        Self::checked(dim, s, WeightForm::Radial { profile, scale })
    }

    pub fn separable(profile: Profile, scale: f64, dim: usize) -> Result<Self> {
        let s = profile.radial_smoothness();
        Self::checked(dim, s, WeightForm::Separable { profile, scale })
    }

    pub fn shifted(profile: Profile, shift: f64, dim: usize) -> Result<Self> {
        Self::checked(dim, Smoothness::C0, WeightForm::Shifted { profile, shift })
    }

    /// Samples on a grid over `[0, R]ⁿ`; the weight is extended evenly in
    /// every coordinate and linearly beyond the last node.
    pub fn sampled(grid: GridFunction) -> Result<Self> {
        if grid.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("sampled weights must be finite".into()));
        }
        if grid.axes().iter().any(|a| a[0] != 0.0) {
            return Err(Error::InvalidGrid(
                "sampled weights start at the origin".into(),
            ));
        }
        Self::checked(grid.dim(), Smoothness::C0, WeightForm::Sampled(grid))
    }

    pub fn custom(
        name: impl Into<String>,
        dim: usize,
        smoothness: Smoothness,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::checked(
            dim,
            smoothness,
            WeightForm::Custom {
                name: name.into(),
                f: Arc::new(f),
            },
        )
    }

    pub(crate) fn mollified(base: Arc<WeightFunction>, rule: Arc<TensorRule>) -> Self {
        WeightFunction {
            dim: base.dim,
            smoothness: Smoothness::CInf,
            form: WeightForm::Mollified { base, rule },
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn form(&self) -> &WeightForm {
        &self.form
    }

    pub fn name(&self) -> String {
        match &self.form {
            WeightForm::Radial { profile, scale } => format!("{}({scale}|x|)", profile.name()),
            WeightForm::Separable { profile, scale } => {
                format!("sum {}({scale}|x_j|)", profile.name())
            }
            WeightForm::Shifted { profile, shift } => {
                format!("{}(|x|_1 + {shift})", profile.name())
            }
            WeightForm::Sampled(g) => format!("sampled{:?}", g.shape()),
            WeightForm::Mollified { base, .. } => format!("mollified[{}]", base.name()),
            WeightForm::Custom { name, .. } => name.clone(),
        }
    }
}

fn euclid(x: &[f64]) -> f64 {
    match x.len() {
        1 => x[0].abs(),
        _ => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
    }
}

fn interpolate(grid: &GridFunction, x: &[f64]) -> f64 {
    let n = grid.dim();
    let mut lower = vec![0usize; n];
    let mut frac = vec![0.0; n];
    for k in 0..n {
        let axis = grid.axis(k);
        let v = x[k].abs();
        let i = match axis.partition_point(|&a| a <= v) {
            0 => 0,
            p => (p - 1).min(axis.len().saturating_sub(2)),
        };
        lower[k] = i;
        frac[k] = if axis.len() > 1 {
            (v - axis[i]) / (axis[i + 1] - axis[i])
        } else {
            0.0
        };
    }
    let mut acc = CompensatedSum::new();
    let mut idx = vec![0usize; n];
    for corner in 0..(1usize << n) {
        let mut w = 1.0;
        for k in 0..n {
            let up = (corner >> (n - 1 - k)) & 1 == 1;
            if up && grid.axis(k).len() == 1 {
                w = 0.0;
            }
            idx[k] = lower[k] + usize::from(up);
            w *= if up { frac[k] } else { 1.0 - frac[k] };
        }
        if w != 0.0 {
            acc.add(w * grid.value_at(&idx).to_f64());
        }
    }
    acc.value()
}

impl Weight for WeightFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match &self.form {
            WeightForm::Radial { profile, scale } => profile.eval(scale * euclid(x)),
            WeightForm::Separable { profile, scale } => {
                x.iter().map(|v| profile.eval(scale * v.abs())).sum()
            }
            WeightForm::Shifted { profile, shift } => {
                profile.eval(x.iter().map(|v| v.abs()).sum::<f64>() + shift)
            }
            WeightForm::Sampled(grid) => interpolate(grid, x),
            WeightForm::Mollified { base, rule } => {
                let n = x.len();
                let mut p = [0.0; MAX_DIM];
                rule.integrate(|xi| {
                    for k in 0..n {
                        p[k] = x[k].abs() + xi[k];
                    }
                    base.eval(&p[..n])
                })
            }
            WeightForm::Custom { f, .. } => f(x),
        }
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightFunction")
            .field("name", &self.name())
            .field("dim", &self.dim)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_axis;

    #[test]
    fn radial_square_family_member() {
        let w = WeightFunction::radial(Profile::Square, 2.0, 1).unwrap();
        assert_eq!(w.eval(&[1.0]), 4.0);
        let w2 = WeightFunction::radial(Profile::Square, 2.0, 2).unwrap();
        assert!((w2.eval(&[1.0, -1.0]) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_weight_interpolates_and_is_even() {
        let ax = uniform_axis(0.0, 4.0, 5);
        let g = GridFunction::from_fn(vec![ax.clone(), ax], |x| x[0] + 2.0 * x[1]).unwrap();
        let w = WeightFunction::sampled(g).unwrap();
        assert!((w.eval(&[1.5, 2.25]) - 6.0).abs() < 1e-12);
        assert_eq!(w.eval(&[-1.5, 2.25]), w.eval(&[1.5, -2.25]));
        assert!((w.eval(&[5.0, 0.0]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_is_validated() {
        assert!(WeightFunction::radial(Profile::Square, 1.0, 4).is_err());
    }
}
