use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::error::Result;
use crate::grid::GridFunction;
use crate::seminorm::TestFunctionSpec;
use crate::weights::FamilySpec;

use super::suites::{sections, Artifact, Context, Output};
use super::{write_plot_data, RunConfig, VerificationReport};

/// A finished run: the report plus any tables to write beside it.
pub struct RunOutcome {
    pub report: VerificationReport,
    artifacts: Vec<Artifact>,
}

impl RunOutcome {
    pub fn artifact_names(&self) -> Vec<String> {
        self.artifacts
            .iter()
            .map(|a| match a {
                Artifact::Transform { name, .. } => format!("transforms/{name}"),
                Artifact::Conjugate { name, .. } => name.clone(),
            })
            .collect()
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Validates the configuration, runs every section of its command and
/// assembles the report.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let command = config.command()?;
    let inputs = &config.inputs;
    let family: Option<FamilySpec> = inputs.family.as_deref().map(read_json).transpose()?;
    let test_function: Option<TestFunctionSpec> =
        inputs.test_function.as_deref().map(read_json).transpose()?;
    let grid = inputs
        .grid
        .as_deref()
        .map(GridFunction::read_csv)
        .transpose()?;
    let ctx = Context {
        seed: config.seed,
        tol: config.tolerances.clone(),
        dims: config.dims(),
        profiles: config.profiles(),
        points: config.options.points,
        oracle_samples: config.options.oracle_samples,
        family,
        test_function,
        grid,
    };
    let parts: Vec<Output> = sections(command).par_iter().map(|s| s(&ctx)).collect();
    let mut all = Output::default();
    for p in parts {
        all.merge(p);
    }
    let mut report = VerificationReport::assemble(
        command,
        config.seed,
        config.tolerances.clone(),
        all.records,
        all.plots,
    )?;
    if config.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report.timestamp = Some(secs.to_string());
    }
    Ok(RunOutcome {
        report,
        artifacts: all.artifacts,
    })
}

/// Writes `report.json`, `plots/<quantity>.csv` and the artifacts under `dir`.
/// Returns the written paths.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let report_path = dir.join("report.json");
    std::fs::write(&report_path, outcome.report.to_json()?)?;
    written.push(report_path);
    let plots = dir.join("plots");
    for q in outcome.report.plot_ids() {
        written.push(write_plot_data(&outcome.report, &q, &plots)?);
    }
    for a in &outcome.artifacts {
        match a {
            Artifact::Transform { name, table } => {
                let path = dir.join("transforms").join(name);
                std::fs::create_dir_all(path.parent().unwrap())?;
                table.write(&path)?;
                written.push(path);
            }
            Artifact::Conjugate { name, grid } => {
                let path = dir.join(name);
                grid.write_csv(&path)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

/// Process exit status for a finished run: 0 when every check passed, 1
/// otherwise. Usage errors exit with 2 before a report exists.
pub fn exit_code(report: &VerificationReport) -> i32 {
    if report.all_passed() {
        0
    } else {
        1
    }
}
