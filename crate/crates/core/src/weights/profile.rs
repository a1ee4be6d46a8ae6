use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::Smoothness;

/// A scalar profile `Ω: [0, ∞) → ℝ`.
#[derive(Clone)]
pub enum Profile {
    /// `t²`
    Square,
    /// `tᵖ`
    Power(f64),
    /// `eᵗ - 1`
    ExpMinusOne,
    /// `cosh t - 1`
    CoshMinusOne,
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl Profile {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Square => t * t,
            Profile::Power(p) => t.powf(*p),
            Profile::ExpMinusOne => t.exp_m1(),
            Profile::CoshMinusOne => {
                let s = (0.5 * t).sinh();
                2.0 * s * s
            }
            Profile::Custom { f, .. } => f(t),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Profile::Square => "t^2".into(),
            Profile::Power(p) => format!("t^{p}"),
            Profile::ExpMinusOne => "exp(t)-1".into(),
            Profile::CoshMinusOne => "cosh(t)-1".into(),
            Profile::Custom { name, .. } => name.clone(),
        }
    }

    /// Smoothness of `x ↦ Ω(c‖x‖)`; odd profiles have a cone point at the origin.
    pub(crate) fn radial_smoothness(&self) -> Smoothness {
        match self {
            Profile::Square | Profile::CoshMinusOne => Smoothness::CInf,
            Profile::Power(p) if p.fract() == 0.0 && (*p as i64) % 2 == 0 => Smoothness::CInf,
            Profile::Power(p) if *p > 2.0 => Smoothness::C2,
            _ => Smoothness::C0,
        }
    }

    /// Finds a decrease of the profile on a probe grid over `[0, 50]`.
    pub fn check_monotone(&self) -> Result<()> {
        let mut prev = self.eval(0.0);
        for i in 1..=5000 {
            let t = i as f64 * 0.01;
            let v = self.eval(t);
            if v.is_nan() || v < prev - 1e-12 * prev.abs().max(1.0) {
                return Err(Error::NonMonotoneProfile(t));
            }
            prev = v;
        }
        Ok(())
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({})", self.name())
    }
}

/// The JSON description of a radial family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub profile: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default = "default_base")]
    pub base: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
}

fn default_base() -> f64 {
    2.0
}

fn default_dim() -> usize {
    1
}

impl FamilySpec {
    pub fn parse_profile(&self) -> Result<Profile> {
        match self.profile.as_str() {
            "t^2" => Ok(Profile::Square),
            "exp(t)-1" => Ok(Profile::ExpMinusOne),
            "cosh(t)-1" => Ok(Profile::CoshMinusOne),
            "t^p" => match self.p {
                Some(p) if p > 1.0 && p.is_finite() => Ok(Profile::Power(p)),
                Some(p) => Err(Error::InvalidArgument(format!(
                    "power profile needs p > 1, got {p}"
                ))),
                None => Err(Error::InvalidArgument(
                    "profile t^p needs the field p".into(),
                )),
            },
            other => Err(Error::InvalidArgument(format!(
                "unknown profile {other:?}; expected t^2, t^p, exp(t)-1 or cosh(t)-1"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_evaluate() {
        assert_eq!(Profile::Square.eval(3.0), 9.0);
        assert!((Profile::ExpMinusOne.eval(1e-10) - 1e-10 - 5e-21).abs() < 1e-25);
        assert!((Profile::CoshMinusOne.eval(1.0) - (1f64.cosh() - 1.0)).abs() < 1e-15);
        assert_eq!(Profile::Power(3.0).eval(2.0), 8.0);
    }

    #[test]
    fn non_monotone_profile_is_detected() {
        let p = Profile::custom("(t-1)^2", |t| (t - 1.0) * (t - 1.0));
        assert!(matches!(
            p.check_monotone(),
            Err(Error::NonMonotoneProfile(_))
        ));
        assert!(Profile::Square.check_monotone().is_ok());
    }

    #[test]
    fn spec_parsing() {
        let s: FamilySpec =
            serde_json::from_str(r#"{"profile": "t^p", "p": 3, "base": 2, "dim": 2}"#).unwrap();
        assert!(matches!(s.parse_profile().unwrap(), Profile::Power(p) if p == 3.0));
        let bad: FamilySpec = serde_json::from_str(r#"{"profile": "sin"}"#).unwrap();
        assert!(bad.parse_profile().is_err());
    }
}
