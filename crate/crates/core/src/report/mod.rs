//! Verification runs: configuration, check records, reports and plot data.
//!
//! A run executes the checks of one command, merges their records in check id
//! order and writes `report.json` plus one CSV per plotted quantity. With the
//! timestamp disabled the report bytes depend only on the configuration.

mod config;
mod run;
pub mod samples;
mod suites;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub use config::{Command, Inputs, Options, RunConfig, Tolerances, DUALITY_PROFILES};
pub use run::{exit_code, run, write_outputs, RunOutcome};

/// Version of the report JSON layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

const ANCHOR_LIST: &str = include_str!("anchors.txt");

/// The names a record may cite as its anchor.
pub fn anchor_registry() -> &'static [&'static str] {
    static ANCHORS: OnceLock<Vec<&'static str>> = OnceLock::new();
    ANCHORS.get_or_init(|| {
        ANCHOR_LIST
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

pub fn is_registered_anchor(anchor: &str) -> bool {
    anchor_registry().contains(&anchor)
}

/// One verified claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub passed: bool,
    /// Slack of the checked inequality (`rhs - lhs`, or tolerance minus
    /// deviation); absent for qualitative checks.
    pub margin: Option<f64>,
    pub tolerance: Option<f64>,
    /// The worst point found, with every estimated constant involved.
    pub witness: Value,
    /// Grids, radii and orders that bound what was searched.
    pub truncation: Value,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: &str) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.to_string(),
            passed: false,
            margin: None,
            tolerance: None,
            witness: Value::Null,
            truncation: Value::Null,
        }
    }

    /// Passes iff `margin ≥ -tol`.
    pub fn margin(mut self, margin: f64, tol: f64) -> Self {
        self.margin = Some(margin);
        self.tolerance = Some(tol);
        self.passed = margin >= -tol;
        self
    }

    /// Passes iff `deviation ≤ tol`; the margin is `tol - deviation`.
    pub fn deviation(mut self, deviation: f64, tol: f64) -> Self {
        self.margin = Some(tol - deviation);
        self.tolerance = Some(tol);
        self.passed = deviation <= tol;
        self
    }

    /// Passes iff `value ≥ threshold`; the margin is `value - threshold`.
    pub fn at_least(mut self, value: f64, threshold: f64) -> Self {
        self.margin = Some(value - threshold);
        self.tolerance = Some(threshold);
        self.passed = value >= threshold;
        self
    }

    pub fn flag(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }

    pub fn witness<T: Serialize>(mut self, w: &T) -> Self {
        self.witness = to_value(w);
        self
    }

    pub fn truncation<T: Serialize>(mut self, t: &T) -> Self {
        self.truncation = to_value(t);
        self
    }

    /// A failed record carrying the error message.
    pub fn error(id: impl Into<String>, anchor: &str, err: &Error) -> Self {
        CheckRecord::new(id, anchor).witness(&serde_json::json!({ "error": err.to_string() }))
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v)
        .unwrap_or_else(|e| serde_json::json!({ "serialization_error": e.to_string() }))
}

/// A table of plotted values; the first column is the abscissa.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PlotData {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl PlotData {
    pub fn new(columns: &[&str]) -> Self {
        PlotData {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub command: Command,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
    pub plots: BTreeMap<String, PlotData>,
}

impl VerificationReport {
    /// Sorts records by id and tallies them. Duplicate ids and anchors
    /// missing from the registry are errors.
    pub fn assemble(
        command: Command,
        seed: u64,
        tolerances: Tolerances,
        mut records: Vec<CheckRecord>,
        plots: BTreeMap<String, PlotData>,
    ) -> Result<Self> {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = records.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Precondition(format!(
                "duplicate check id {}",
                w[0].id
            )));
        }
        if let Some(r) = records.iter().find(|r| !is_registered_anchor(&r.anchor)) {
            return Err(Error::Precondition(format!(
                "record {} cites unregistered anchor {:?}",
                r.id, r.anchor
            )));
        }
        let passed = records.iter().filter(|r| r.passed).count();
        Ok(VerificationReport {
            schema_version: REPORT_SCHEMA_VERSION,
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            seed,
            tolerances,
            timestamp: None,
            summary: Summary {
                total: records.len(),
                passed,
                failed: records.len() - passed,
            },
            records,
            plots,
        })
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.records
            .binary_search_by(|r| r.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn plot_ids(&self) -> Vec<String> {
        self.plots.keys().cloned().collect()
    }
}

/// CSV of a plotted quantity: a header row, then the rows sorted by the
/// first column (stable, so ties keep their computed order).
pub fn emit_plot_data(report: &VerificationReport, quantity: &str) -> Result<String> {
    let plot = report
        .plots
        .get(quantity)
        .ok_or_else(|| Error::UnknownQuantity {
            requested: quantity.to_string(),
            available: report.plot_ids(),
        })?;
    let mut rows: Vec<&Vec<f64>> = plot.rows.iter().collect();
    rows.sort_by(|a, b| {
        let key = |r: &Vec<f64>| r.first().copied().unwrap_or(f64::NAN);
        key(a).total_cmp(&key(b))
    });
    let mut out = plot.columns.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    Ok(out)
}

/// Writes [`emit_plot_data`] to `dir/<quantity>.csv`.
pub fn write_plot_data(report: &VerificationReport, quantity: &str, dir: &Path) -> Result<PathBuf> {
    let csv = emit_plot_data(report, quantity)?;
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{quantity}.csv"));
    std::fs::write(&path, csv)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(
        records: Vec<CheckRecord>,
        plots: BTreeMap<String, PlotData>,
    ) -> Result<VerificationReport> {
        VerificationReport::assemble(Command::Duality, 1, Tolerances::default(), records, plots)
    }

    #[test]
    fn registry_has_plumbing_and_lemmas() {
        assert!(is_registered_anchor("plumbing"));
        assert!(is_registered_anchor("Lemma 2"));
        assert!(!is_registered_anchor("Lemma 7"));
        assert!(!anchor_registry().iter().any(|a| a.starts_with('#')));
    }

    #[test]
    fn assembly_sorts_and_counts() {
        let r = report(
            vec![
                CheckRecord::new("b", "Lemma 1").margin(1.0, 1e-8),
                CheckRecord::new("a", "plumbing").deviation(2.0, 1.0),
            ],
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(r.records[0].id, "a");
        assert_eq!(r.summary.total, 2);
        assert_eq!(r.summary.passed, 1);
        assert!(!r.all_passed());
        assert!(r.record("b").unwrap().passed);
        assert!(r.record("c").is_none());
    }

    #[test]
    fn assembly_rejects_duplicates_and_unknown_anchors() {
        let dup = vec![
            CheckRecord::new("a", "plumbing"),
            CheckRecord::new("a", "plumbing"),
        ];
        assert!(report(dup, BTreeMap::new()).is_err());
        assert!(report(vec![CheckRecord::new("a", "Lemma 9")], BTreeMap::new()).is_err());
    }

    #[test]
    fn plot_csv_is_sorted_and_header_only_when_empty() {
        let mut plots = BTreeMap::new();
        let mut p = PlotData::new(&["x", "gap"]);
        p.rows = vec![vec![2.0, 0.5], vec![-1.0, 0.25], vec![0.0, 0.0]];
        plots.insert("duality-gaps".to_string(), p);
        plots.insert("empty".to_string(), PlotData::new(&["x", "y"]));
        let r = report(Vec::new(), plots).unwrap();
        assert_eq!(
            emit_plot_data(&r, "duality-gaps").unwrap(),
            "x,gap\n-1,0.25\n0,0\n2,0.5\n"
        );
        assert_eq!(emit_plot_data(&r, "empty").unwrap(), "x,y\n");
        match emit_plot_data(&r, "missing") {
            Err(Error::UnknownQuantity { available, .. }) => {
                assert_eq!(available, vec!["duality-gaps", "empty"])
            }
            other => panic!("{other:?}"),
        }
    }
}
