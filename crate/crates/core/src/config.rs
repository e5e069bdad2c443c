//! TOML experiment configuration.
//!
//! ```toml
//! seed = 42
//! output = "ising.csv"
//!
//! [model]
//! kind = "ising"        # ising | heisenberg | hubbard | file
//! rows = 1
//! cols = 6
//! j = 1.0
//! h = 1.0
//!
//! [formula]
//! order = 2             # Suzuki order 1, 2 or 4
//!
//! [sweep]
//! modes = ["trotter", "standard"]
//! time_grid = { start = 0.05, stop = 1.5, points = 12, spacing = "log" }
//! layers = [1]
//! samples = [10000]
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{suzuki, ProductFormula};
use crate::models::{self, LatticeSpec, Model};
use crate::sampler::SteerMode;

fn one() -> f64 {
    1.0
}

fn four() -> f64 {
    4.0
}

fn yes() -> bool {
    true
}

/// Hamiltonian to simulate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Ising {
        #[serde(default = "default_rows")]
        rows: usize,
        cols: usize,
        #[serde(default = "one")]
        j: f64,
        #[serde(default = "one")]
        h: f64,
    },
    /// Random-field chain; fields come from `field_seed`, or the master seed when absent.
    Heisenberg {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field_seed: Option<u64>,
    },
    Hubbard {
        rows: usize,
        cols: usize,
        #[serde(default = "one")]
        j: f64,
        #[serde(default = "four")]
        u: f64,
    },
    File {
        path: PathBuf,
    },
}

fn default_rows() -> usize {
    1
}

impl ModelSpec {
    pub fn build(&self, master_seed: u64) -> Result<Model> {
        match self {
            ModelSpec::Ising { rows, cols, j, h } => models::tf_ising(LatticeSpec::new(*rows, *cols)?, *j, *h),
            ModelSpec::Heisenberg { n, field_seed } => {
                models::heisenberg_random_field(LatticeSpec::line(*n)?, field_seed.unwrap_or(master_seed))
            }
            ModelSpec::Hubbard { rows, cols, j, u } => models::fermi_hubbard(LatticeSpec::new(*rows, *cols)?, *j, *u),
            ModelSpec::File { path } => models::load_hamiltonian(path),
        }
    }

    fn resolve_paths(&mut self, base: &Path) {
        if let ModelSpec::File { path } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
}

/// Suzuki formula over the model's partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaSpec {
    pub order: usize,
}

impl FormulaSpec {
    pub fn build(&self, model: &Model) -> Result<ProductFormula> {
        suzuki(self.order, &model.partition)
    }
}

impl FromStr for FormulaSpec {
    type Err = Error;

    /// `suzuki2`, `trotter1`, or a bare order.
    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim_start_matches("suzuki").trim_start_matches("trotter");
        digits
            .parse()
            .map(|order| FormulaSpec { order })
            .map_err(|_| Error::Config(format!("unknown formula {s:?} (use suzuki1, suzuki2 or suzuki4)")))
    }
}

/// Simulation method of one CSV row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// The bare product formula.
    Trotter,
    Steer(SteerMode),
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Trotter => "trotter",
            Method::Steer(m) => m.name(),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "trotter" {
            Ok(Method::Trotter)
        } else {
            s.parse().map(Method::Steer)
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// `points` values from `start` to `stop` inclusive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::Config("time grid needs at least one point".into()));
        }
        if self.spacing == Spacing::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(Error::Config("log grid needs positive bounds".into()));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let n = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let f = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect())
    }
}

/// Initial state: `random` basis state from the seed, `zero`, `neel`
/// (Hubbard checkerboard minus centre), or a basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialState {
    Random,
    Zero,
    /// Hubbard: the checkerboard filling with the centre electron removed. Spin models: alternating bits, qubit 0 up.
    Neel,
    Index(usize),
}

impl Serialize for InitialState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            InitialState::Random => s.serialize_str("random"),
            InitialState::Zero => s.serialize_str("zero"),
            InitialState::Neel => s.serialize_str("neel"),
            InitialState::Index(i) => s.serialize_u64(*i as u64),
        }
    }
}

impl<'de> Deserialize<'de> for InitialState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Name(String),
        }
        let s = match Raw::deserialize(d)? {
            Raw::Index(i) => return Ok(InitialState::Index(i)),
            Raw::Name(s) => s,
        };
        match s.as_str() {
            "random" => Ok(InitialState::Random),
            "zero" => Ok(InitialState::Zero),
            "neel" => Ok(InitialState::Neel),
            x => x
                .parse()
                .map(InitialState::Index)
                .map_err(|_| serde::de::Error::custom(format!("unknown initial state {x:?}"))),
        }
    }
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Random
    }
}

/// Grid of runs: every combination of mode, time, layer count and sample count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub modes: Vec<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_grid: Option<GridSpec>,
    pub layers: Vec<usize>,
    pub samples: Vec<usize>,
    #[serde(default)]
    pub initial_state: InitialState,
}

impl SweepSpec {
    pub fn time_values(&self) -> Result<Vec<f64>> {
        match (&self.times, &self.time_grid) {
            (Some(t), None) => Ok(t.clone()),
            (None, Some(g)) => g.values(),
            _ => Err(Error::Config("give exactly one of `times` and `time_grid`".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output: PathBuf,
    /// Worker threads; all available cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Write measured wall time; when false the column holds 0 so reruns are byte-identical.
    #[serde(default = "yes")]
    pub record_wall_time: bool,
    pub model: ModelSpec,
    pub formula: FormulaSpec,
    pub sweep: SweepSpec,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load and validate; relative paths resolve against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.model.resolve_paths(base);
        if cfg.output.is_relative() {
            cfg.output = base.join(&cfg.output);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.sweep;
        if s.modes.is_empty() || s.layers.is_empty() || s.samples.is_empty() {
            return Err(Error::Config("modes, layers and samples must be non-empty".into()));
        }
        let times = s.time_values()?;
        if times.is_empty() || times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Config("times must be positive and finite".into()));
        }
        if s.layers.contains(&0) || s.samples.contains(&0) {
            return Err(Error::Config("layers and samples must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        if ![1, 2, 4].contains(&self.formula.order) {
            return Err(Error::Config(format!("formula order {} not in {{1, 2, 4}}", self.formula.order)));
        }
        Ok(())
    }
}
