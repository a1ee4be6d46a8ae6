use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A real number or `+inf`. `-inf` and NaN are never constructed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    /// Converts an IEEE value, mapping `+inf` to [`ExtendedReal::PosInf`].
    pub fn try_from_f64(v: f64) -> Result<Self> {
        if v.is_nan() {
            Err(Error::InvalidArgument("NaN is not an extended real".into()))
        } else if v == f64::INFINITY {
            Ok(ExtendedReal::PosInf)
        } else if v == f64::NEG_INFINITY {
            Err(Error::InvalidArgument("-inf is not allowed".into()))
        } else {
            Ok(ExtendedReal::Finite(v))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::PosInf => None,
        }
    }

    /// IEEE view, for export and plotting only.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), PosInf) => Some(Ordering::Less),
            (PosInf, Finite(_)) => Some(Ordering::Greater),
            (PosInf, PosInf) => Some(Ordering::Equal),
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::PosInf,
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: f64) -> Self {
        self + ExtendedReal::Finite(rhs)
    }
}

impl From<f64> for ExtendedReal {
    /// Panics on NaN or `-inf`; use [`ExtendedReal::try_from_f64`] for untrusted input.
    fn from(v: f64) -> Self {
        ExtendedReal::try_from_f64(v).expect("value is not an extended real")
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::PosInf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => ExtendedReal::try_from_f64(v).map_err(serde::de::Error::custom),
            Repr::Str(s) if s == "inf" || s == "+inf" => Ok(ExtendedReal::PosInf),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad extended real `{s}`"))),
        }
    }
}
