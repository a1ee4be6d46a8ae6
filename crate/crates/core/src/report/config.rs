//! Run configuration: the JSON file format and its validation.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Conjugate,
    Duality,
    FamilyCheck,
    Seminorm,
    Embedding,
    FourierVerify,
    FullSuite,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Conjugate,
        Command::Duality,
        Command::FamilyCheck,
        Command::Seminorm,
        Command::Embedding,
        Command::FourierVerify,
        Command::FullSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Conjugate => "conjugate",
            Command::Duality => "duality",
            Command::FamilyCheck => "family-check",
            Command::Seminorm => "seminorm",
            Command::Embedding => "embedding",
            Command::FourierVerify => "fourier-verify",
            Command::FullSuite => "full-suite",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown command {s:?}")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Optional input files; built-in defaults are used for anything missing.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    /// Radial family description (`FamilySpec` JSON).
    pub family: Option<PathBuf>,
    /// Test function description (`TestFunctionSpec` JSON).
    pub test_function: Option<PathBuf>,
    /// Sampled function (`GridFunction` CSV) to conjugate.
    pub grid: Option<PathBuf>,
}

/// Check tolerances. Each applies to margins `rhs - lhs`, or to absolute
/// deviations for identities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Fast conjugates against the brute-force oracle.
    pub oracle: f64,
    /// `|duality_gap|`.
    pub duality: f64,
    /// Lattice and pointwise inequality slack.
    pub inequality: f64,
    /// Lower bound of the duality sum.
    pub duality_lower: f64,
    /// Seminorm chain margins.
    pub chain: f64,
    /// Exact identities such as the dilation condition of a radial family.
    pub identity: f64,
    /// Taylor extension against exact evaluation, relative to `max(1, |f|)`.
    pub taylor: f64,
    /// Gaussian self-duality.
    pub self_duality: f64,
    /// Parseval, round trip and transform derivatives.
    pub transform: f64,
    /// Smallest biconjugate error ratio under mesh halving.
    pub halving_ratio: f64,
    /// Midpoint convexity slack, relative to `max(1, |rhs|)`.
    pub convexity: f64,
    /// Change of a series partial sum after it is declared stable, relative.
    pub series: f64,
    /// Mollifier quadrature at two orders, relative.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            oracle: 1e-10,
            duality: 1e-6,
            inequality: 1e-8,
            duality_lower: 1e-6,
            chain: 1e-6,
            identity: 1e-12,
            taylor: 1e-8,
            self_duality: 1e-10,
            transform: 1e-8,
            halving_ratio: 1.5,
            convexity: 1e-10,
            series: 1e-12,
            quadrature: 1e-9,
        }
    }
}

impl Tolerances {
    fn entries(&self) -> [(&'static str, f64); 13] {
        [
            ("oracle", self.oracle),
            ("duality", self.duality),
            ("inequality", self.inequality),
            ("duality_lower", self.duality_lower),
            ("chain", self.chain),
            ("identity", self.identity),
            ("taylor", self.taylor),
            ("self_duality", self.self_duality),
            ("transform", self.transform),
            ("halving_ratio", self.halving_ratio),
            ("convexity", self.convexity),
            ("series", self.series),
            ("quadrature", self.quadrature),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.entries() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Command-specific knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Duality profiles: `t^2`, `t^4`, `cosh(t)-1`. Empty means all three.
    pub profiles: Vec<String>,
    /// Random duality points per profile and dimension.
    pub points: usize,
    /// Dimensions to run. Empty means `[1]` for single commands and
    /// `[1, 2]` for the full suite.
    pub dims: Vec<usize>,
    /// Randomized conjugate samples per dimension.
    pub oracle_samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            profiles: Vec::new(),
            points: 20,
            dims: Vec::new(),
            oracle_samples: 100,
        }
    }
}

pub const DUALITY_PROFILES: [&str; 3] = ["t^2", "t^4", "cosh(t)-1"];

fn default_seed() -> u64 {
    42
}

fn default_out() -> PathBuf {
    PathBuf::from("conjlab-out")
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    #[serde(default)]
    pub inputs: Inputs,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Record the wall-clock time of the run in the report.
    #[serde(default = "default_true")]
    pub timestamp: bool,
    #[serde(default)]
    pub options: Options,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            inputs: Inputs::default(),
            tolerances: Tolerances::default(),
            out: default_out(),
            seed: default_seed(),
            timestamp: true,
            options: Options::default(),
        }
    }
}

impl RunConfig {
    pub fn for_command(command: Command) -> Self {
        RunConfig {
            command: Some(command),
            ..RunConfig::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn command(&self) -> Result<Command> {
        self.command
            .ok_or_else(|| Error::InvalidArgument("no command given in flags or config".into()))
    }

    /// Dimensions to run for the selected command.
    pub fn dims(&self) -> Vec<usize> {
        if !self.options.dims.is_empty() {
            self.options.dims.clone()
        } else if self.command == Some(Command::FullSuite) {
            vec![1, 2]
        } else {
            vec![1]
        }
    }

    pub fn profiles(&self) -> Vec<String> {
        if self.options.profiles.is_empty() {
            DUALITY_PROFILES.iter().map(|s| s.to_string()).collect()
        } else {
            self.options.profiles.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.command()?;
        self.tolerances.validate()?;
        for &n in &self.options.dims {
            if !(1..=2).contains(&n) {
                return Err(Error::InvalidArgument(format!(
                    "dimension {n} is not supported by the suites (1 or 2)"
                )));
            }
        }
        for p in &self.options.profiles {
            if !DUALITY_PROFILES.contains(&p.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "unknown duality profile {p:?}; expected one of {DUALITY_PROFILES:?}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = RunConfig::from_json(r#"{"command": "full-suite"}"#).unwrap();
        assert_eq!(c.command, Some(Command::FullSuite));
        assert_eq!(c.seed, 42);
        assert_eq!(c.dims(), vec![1, 2]);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn unknown_fields_and_bad_values_are_rejected() {
        assert!(RunConfig::from_json(r#"{"command": "duality", "sed": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"command": "nope"}"#).is_err());
        assert!(RunConfig::from_json("{").is_err());
        let c = RunConfig::from_json(r#"{"command": "duality", "tolerances": {"duality": 0}}"#)
            .unwrap();
        assert!(c.validate().is_err());
        let c = RunConfig::from_json(r#"{"command": "duality", "options": {"profiles": ["t^3"]}}"#)
            .unwrap();
        assert!(c.validate().is_err());
        assert!(RunConfig::from_json("{}").unwrap().validate().is_err());
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(Command::parse(c.name()).unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
    }
}
