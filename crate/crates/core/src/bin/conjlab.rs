use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use conjlab::report::{exit_code, run, write_outputs, Command, RunConfig};

/// Numerical verification of conjugate, weight-family, seminorm and Fourier
/// inequalities.
#[derive(Parser, Debug)]
#[command(name = "conjlab", version)]
struct Cli {
    /// conjugate, duality, family-check, seminorm, embedding, fourier-verify or full-suite
    command: Option<String>,
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Inequality tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the timestamp out so reports are byte-identical across runs.
    #[arg(long)]
    no_timestamp: bool,
    /// Duality profile; repeatable.
    #[arg(long = "profile")]
    profiles: Vec<String>,
    /// Random duality points per profile and dimension.
    #[arg(long)]
    points: Option<usize>,
    /// Dimension to run; repeatable.
    #[arg(long = "dim")]
    dims: Vec<usize>,
}

fn configure(cli: Cli) -> conjlab::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::read(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = &cli.command {
        cfg.command = Some(Command::parse(c)?);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.tol {
        cfg.tolerances.inequality = t;
    }
    if let Some(o) = cli.out {
        cfg.out = o;
    }
    if cli.no_timestamp {
        cfg.timestamp = false;
    }
    if !cli.profiles.is_empty() {
        cfg.options.profiles = cli.profiles;
    }
    if let Some(p) = cli.points {
        cfg.options.points = p;
    }
    if !cli.dims.is_empty() {
        cfg.options.dims = cli.dims;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cfg = match configure(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("conjlab: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("conjlab: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_outputs(&outcome, &cfg.out) {
        eprintln!("conjlab: cannot write outputs: {e}");
        return ExitCode::from(2);
    }
    let s = &outcome.report.summary;
    println!(
        "{}: {} checks, {} passed, {} failed",
        cfg.command.unwrap(),
        s.total,
        s.passed,
        s.failed
    );
    for r in outcome.report.records.iter().filter(|r| !r.passed) {
        println!("FAIL {} [{}] margin={:?}", r.id, r.anchor, r.margin);
    }
    println!("report: {}", cfg.out.join("report.json").display());
    ExitCode::from(exit_code(&outcome.report) as u8)
}
