//! Transform values as CSV with the quadrature rule in a JSON sidecar.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seminorm::TestFunction;

use super::quadrature::{fourier, QuadratureSpec, TransformValue};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformTable {
    pub function: String,
    pub dim: usize,
    pub spec: QuadratureSpec,
    #[serde(skip)]
    pub points: Vec<Vec<f64>>,
    #[serde(skip)]
    pub values: Vec<TransformValue>,
}

impl TransformTable {
    pub fn compute(f: &TestFunction, spec: &QuadratureSpec, points: Vec<Vec<f64>>) -> Result<Self> {
        let values = fourier(f, spec, &points)?;
        Ok(TransformTable {
            function: f.name(),
            dim: f.dim(),
            spec: spec.clone(),
            points,
            values,
        })
    }

    /// Columns `x1..xn, re, im, err_estimate`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let xs: Vec<String> = (1..=self.dim).map(|j| format!("x{j}")).collect();
        let _ = writeln!(out, "{},re,im,err_estimate", xs.join(","));
        for (p, v) in self.points.iter().zip(&self.values) {
            for x in p {
                let _ = write!(out, "{x:e},");
            }
            let _ = writeln!(out, "{:e},{:e},{:e}", v.re, v.im, v.error_estimate);
        }
        out
    }

    /// Writes `csv_path` and the sidecar next to it with extension `json`;
    /// returns the sidecar path.
    pub fn write(&self, csv_path: &Path) -> Result<PathBuf> {
        if csv_path.extension().is_some_and(|e| e == "json") {
            return Err(Error::InvalidArgument(
                "CSV path must not end in .json".into(),
            ));
        }
        fs::write(csv_path, self.to_csv())?;
        let sidecar = csv_path.with_extension("json");
        fs::write(&sidecar, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(sidecar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_sidecar() {
        let f = TestFunction::gaussian(0.5, 2).unwrap();
        let spec = QuadratureSpec::for_function(&f, 0).unwrap();
        let t = TransformTable::compute(&f, &spec, vec![vec![0.0, 0.0], vec![1.0, -1.0]]).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x1,x2,re,im,err_estimate");
        assert_eq!(lines.len(), 3);
        let dir = tempfile::tempdir().unwrap();
        let side = t.write(&dir.path().join("ft.csv")).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(side).unwrap()).unwrap();
        assert_eq!(json["spec"]["nodes"], 512);
    }
}
