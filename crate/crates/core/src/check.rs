//! Records of numerically checked inequalities `lhs ≤ rhs`.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityRecord {
    pub label: String,
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative when the inequality is violated.
    pub margin: f64,
}

impl InequalityRecord {
    pub fn new(label: impl Into<String>, point: Vec<f64>, lhs: f64, rhs: f64) -> Self {
        InequalityRecord {
            label: label.into(),
            point,
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.margin >= -tol
    }
}

/// The record with the smallest margin; the first one wins ties.
pub fn worst(records: &[InequalityRecord]) -> Option<&InequalityRecord> {
    records
        .iter()
        .fold(None, |acc: Option<&InequalityRecord>, r| match acc {
            Some(best) if best.margin <= r.margin || r.margin.is_nan() => Some(best),
            _ => Some(r),
        })
}

pub fn all_hold(records: &[InequalityRecord], tol: f64) -> bool {
    records.iter().all(|r| r.holds(tol))
}
