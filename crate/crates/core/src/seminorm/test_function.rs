//! Entire test functions of the form `c · Π P_j(z_j) e^{-a_j z_j²}` with
//! closed-form derivatives of every order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::MAX_DIM;
use crate::multi_index::MultiIndex;

/// One-dimensional factor `P(t) e^{-a t²}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Factor {
    /// `e^{-a t²}`
    Gaussian { a: f64 },
    /// `H_k(√(2a) t) e^{-a t²}` with the physicists' Hermite polynomial.
    HermiteGaussian { k: u32, a: f64 },
    /// `(Σ cᵢ tⁱ) e^{-a t²}`
    PolyGaussian { coeffs: Vec<f64>, a: f64 },
}

impl Factor {
    pub fn a(&self) -> f64 {
        match *self {
            Factor::Gaussian { a }
            | Factor::HermiteGaussian { a, .. }
            | Factor::PolyGaussian { a, .. } => a,
        }
    }

    /// Coefficients of `P` in ascending powers.
    pub fn polynomial(&self) -> Vec<f64> {
        match self {
            Factor::Gaussian { .. } => vec![1.0],
            Factor::HermiteGaussian { k, a } => {
                let c = (2.0 * a).sqrt();
                let mut s = 1.0;
                hermite_coefficients(*k)
                    .into_iter()
                    .map(|h| {
                        let v = h * s;
                        s *= c;
                        v
                    })
                    .collect()
            }
            Factor::PolyGaussian { coeffs, .. } => coeffs.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        let a = self.a();
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gaussian rate must be positive, got {a}"
            )));
        }
        if let Factor::PolyGaussian { coeffs, .. } = self {
            if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidArgument(
                    "polynomial coefficients must be finite and non-empty".into(),
                ));
            }
        }
        Ok(())
    }

    fn label(&self) -> String {
        match self {
            Factor::Gaussian { a } => format!("gaussian({a})"),
            Factor::HermiteGaussian { k, a } => format!("hermite-gaussian({k},{a})"),
            Factor::PolyGaussian { coeffs, a } => format!("poly-gaussian({coeffs:?},{a})"),
        }
    }
}

/// Physicists' Hermite polynomial coefficients, ascending.
pub(crate) fn hermite_coefficients(k: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for j in 1..k {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2.0 * j as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_0(u), ..., H_order(u)` by the three-term recurrence.
pub(crate) fn hermite_values(u: f64, order: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(order + 1);
    h.push(1.0);
    if order > 0 {
        h.push(2.0 * u);
    }
    for k in 1..order {
        h.push(2.0 * u * h[k] - 2.0 * k as f64 * h[k - 1]);
    }
    h
}

fn horner<T>(coeffs: &[f64], x: T) -> T
where
    T: Copy + std::ops::Mul<T, Output = T> + std::ops::Add<f64, Output = T> + From<f64>,
{
    coeffs
        .iter()
        .rev()
        .fold(T::from(0.0), |acc, &c| acc * x + c)
}

#[derive(Clone, Debug, PartialEq)]
struct Compiled {
    poly: Vec<f64>,
    a: f64,
}

impl Compiled {
    fn eval_complex(&self, z: Complex64) -> Complex64 {
        horner(&self.poly, z) * (-self.a * z * z).exp()
    }

    fn ln_abs_complex(&self, z: Complex64) -> f64 {
        horner(&self.poly, z).norm().ln() - self.a * (z.re * z.re - z.im * z.im)
    }

    /// `D^k f(x)` for `k = 0..=order` by Leibniz over the polynomial and the
    /// Hermite representation `D^j e^{-at²} = (-√a)^j H_j(√a t) e^{-at²}`.
    fn derivatives(&self, x: f64, order: usize) -> Vec<f64> {
        let sa = self.a.sqrt();
        let g = (-self.a * x * x).exp();
        let h = hermite_values(sa * x, order);
        let mut gd = Vec::with_capacity(order + 1);
        let mut s = 1.0;
        for hj in &h {
            gd.push(s * hj * g);
            s *= -sa;
        }
        let mut pd = vec![horner(&self.poly, x)];
        let mut p = self.poly.clone();
        while p.len() > 1 && pd.len() <= order {
            p = p
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect();
            pd.push(horner(&p, x));
        }
        (0..=order)
            .map(|k| {
                let mut binom = 1.0;
                let mut acc = 0.0;
                for (i, pi) in pd.iter().enumerate().take(k + 1) {
                    acc += binom * pi * gd[k - i];
                    binom = binom * (k - i) as f64 / (i + 1) as f64;
                }
                acc
            })
            .collect()
    }
}

/// `c · Π_j f_j(z_j)` on `ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    scale: f64,
    factors: Vec<Factor>,
    compiled: Vec<Compiled>,
}

/// JSON description of a test function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Factor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

impl TestFunction {
    pub fn product(factors: Vec<Factor>) -> Result<Self> {
        Self::scaled_product(1.0, factors)
    }

    pub fn scaled_product(scale: f64, factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() || factors.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension(factors.len()));
        }
        if !scale.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale must be finite, got {scale}"
            )));
        }
        for f in &factors {
            f.validate()?;
        }
        let compiled = factors
            .iter()
            .map(|f| Compiled {
                poly: f.polynomial(),
                a: f.a(),
            })
            .collect();
        Ok(TestFunction {
            scale,
            factors,
            compiled,
        })
    }

    /// `e^{-a Σ z_j²}`.
    pub fn gaussian(a: f64, dim: usize) -> Result<Self> {
        Self::product(vec![Factor::Gaussian { a }; dim])
    }

    pub fn hermite_gaussian(k: u32, a: f64, dim: usize) -> Result<Self> {
        Self::product(vec![Factor::HermiteGaussian { k, a }; dim])
    }

    pub fn poly_gaussian(coeffs: Vec<f64>, a: f64, dim: usize) -> Result<Self> {
        Self::product(vec![Factor::PolyGaussian { coeffs, a }; dim])
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::scaled_product(0.0, vec![Factor::Gaussian { a: 1.0 }; dim])
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::scaled_product(self.scale * c, self.factors.clone())
    }

    pub fn from_spec(spec: &TestFunctionSpec) -> Result<Self> {
        let dim = spec.dim.unwrap_or(1);
        let need_a = || {
            spec.a.ok_or_else(|| {
                Error::InvalidArgument(format!("kind {} needs the field a", spec.kind))
            })
        };
        let factors = match spec.kind.as_str() {
            "gaussian" => vec![Factor::Gaussian { a: need_a()? }; dim],
            "hermite-gaussian" => {
                let k = spec.k.ok_or_else(|| Error::InvalidArgument("hermite-gaussian needs the field k".into()))?;
                vec![Factor::HermiteGaussian { k, a: need_a()? }; dim]
            }
            "poly-gaussian" => {
                let coeffs = spec
                    .coeffs
                    .clone()
                    .ok_or_else(|| Error::InvalidArgument("poly-gaussian needs the field coeffs".into()))?;
                vec![Factor::PolyGaussian { coeffs, a: need_a()? }; dim]
            }
            "product" => spec
                .factors
                .clone()
                .ok_or_else(|| Error::InvalidArgument("product needs the field factors".into()))?,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown test function kind {other:?}; expected gaussian, hermite-gaussian, poly-gaussian or product"
                )))
            }
        };
        Self::scaled_product(spec.scale.unwrap_or(1.0), factors)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    pub fn to_spec(&self) -> TestFunctionSpec {
        TestFunctionSpec {
            kind: "product".into(),
            a: None,
            k: None,
            coeffs: None,
            dim: None,
            factors: Some(self.factors.clone()),
            scale: (self.scale != 1.0).then_some(self.scale),
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn name(&self) -> String {
        let body = if self.factors.windows(2).all(|w| w[0] == w[1]) && self.dim() > 1 {
            format!("{}^⊗{}", self.factors[0].label(), self.dim())
        } else {
            self.factors
                .iter()
                .map(Factor::label)
                .collect::<Vec<_>>()
                .join("⊗")
        };
        if self.scale == 1.0 {
            body
        } else {
            format!("{}·{body}", self.scale)
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.compiled
            .iter()
            .zip(z)
            .fold(Complex64::new(self.scale, 0.0), |acc, (f, &zj)| {
                acc * f.eval_complex(zj)
            })
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        self.compiled
            .iter()
            .zip(x)
            .fold(self.scale, |acc, (f, &xj)| acc * f.derivatives(xj, 0)[0])
    }

    /// `ln |f(z)| - ln |c|`, robust where `|f|` under- or overflows.
    pub fn ln_abs_unscaled(&self, z: &[Complex64]) -> f64 {
        self.compiled
            .iter()
            .zip(z)
            .map(|(f, &zj)| f.ln_abs_complex(zj))
            .sum()
    }

    /// `f_j(z)` of factor `j`, without the scale.
    pub fn factor_eval(&self, j: usize, z: Complex64) -> Complex64 {
        self.compiled[j].eval_complex(z)
    }

    /// `ln |f_j(z)|` of factor `j`, without the scale.
    pub fn ln_abs_factor(&self, j: usize, z: Complex64) -> f64 {
        self.compiled[j].ln_abs_complex(z)
    }

    /// `D^k f_j(t)` for `k ≤ order` of factor `j`, without the scale.
    pub fn factor_derivatives(&self, j: usize, t: f64, order: usize) -> Vec<f64> {
        self.compiled[j].derivatives(t, order)
    }

    /// `D^α f(x)`.
    pub fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> f64 {
        self.compiled
            .iter()
            .zip(x)
            .zip(alpha.components())
            .fold(self.scale, |acc, ((f, &xj), &k)| {
                acc * f.derivatives(xj, k as usize)[k as usize]
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_polynomials() {
        assert_eq!(hermite_coefficients(3), vec![0.0, -12.0, 0.0, 8.0]);
        let u = 0.7;
        let h = hermite_values(u, 4);
        assert!((h[4] - horner(&hermite_coefficients(4), u)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_derivatives_match_closed_forms() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let x: f64 = 1.3;
        let g = (-0.5 * x * x).exp();
        let d = f.factor_derivatives(0, x, 3);
        assert!((d[1] + x * g).abs() < 1e-15);
        assert!((d[2] - (x * x - 1.0) * g).abs() < 1e-15);
        assert!((d[3] - (3.0 * x - x.powi(3)) * g).abs() < 1e-14);
    }

    #[test]
    fn complex_evaluation() {
        let f = TestFunction::gaussian(0.5, 1).unwrap();
        let v = f.eval(&[Complex64::new(0.0, 1.0)]);
        assert!((v.re - 0.5f64.exp()).abs() < 1e-15 && v.im.abs() < 1e-15);
        let h = TestFunction::hermite_gaussian(2, 0.5, 1).unwrap();
        assert!((h.eval_real(&[1.0]) - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        assert!(
            (h.ln_abs_unscaled(&[Complex64::new(1.0, 0.0)]) - h.eval_real(&[1.0]).ln()).abs()
                < 1e-14
        );
    }

    #[test]
    fn spec_parsing() {
        let f =
            TestFunction::from_json(r#"{"kind": "hermite-gaussian", "k": 2, "a": 0.5, "dim": 2}"#)
                .unwrap();
        assert_eq!(f.dim(), 2);
        let back = TestFunction::from_spec(&f.to_spec()).unwrap();
        assert_eq!(back, f);
        assert!(TestFunction::from_json(r#"{"kind": "gaussian"}"#).is_err());
        assert!(TestFunction::from_json(r#"{"kind": "gaussian", "a": -1}"#).is_err());
        assert!(TestFunction::from_json(r#"{"kind": "sinc", "a": 1}"#).is_err());
    }

    #[test]
    fn derivative_of_product() {
        let f = TestFunction::product(vec![
            Factor::Gaussian { a: 1.0 },
            Factor::PolyGaussian {
                coeffs: vec![0.0, 1.0],
                a: 1.0,
            },
        ])
        .unwrap();
        let alpha = MultiIndex::new(vec![1, 1]);
        let (x, y) = (0.4f64, -0.3f64);
        let expected = (-2.0 * x * (-x * x).exp()) * ((1.0 - 2.0 * y * y) * (-y * y).exp());
        assert!((f.derivative(&alpha, &[x, y]) - expected).abs() < 1e-15);
    }
}
