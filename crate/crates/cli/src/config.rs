//! Run configuration: JSON file values, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilySpec {
    pub name: String,
    pub params: Value,
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec {
            name: "exp".into(),
            params: Value::Object(Default::default()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub root_tol: f64,
    pub radius_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_tol: szego::rootfind::DEFAULT_TOL,
            radius_factor: szego::harness::DEFAULT_RADIUS_FACTOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub family: FamilySpec,
    pub n_list: Vec<usize>,
    pub output_dir: PathBuf,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: FamilySpec::default(),
            n_list: vec![50, 100, 200],
            output_dir: PathBuf::from("out"),
            tolerances: Tolerances::default(),
            seed: 0,
        }
    }
}

/// Flag values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub family: Option<String>,
    pub params: Option<String>,
    pub n_list: Option<Vec<usize>>,
    pub output_dir: Option<PathBuf>,
    pub root_tol: Option<f64>,
    pub radius_factor: Option<f64>,
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Reads `path` when given, then applies the overrides.
    pub fn load(path: Option<&Path>, o: Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(f) = o.family {
            cfg.family.name = f;
        }
        if let Some(p) = o.params {
            cfg.family.params =
                serde_json::from_str(&p).map_err(|e| CliError::Usage(format!("--params is not JSON: {e}")))?;
        }
        if let Some(n) = o.n_list {
            cfg.n_list = n;
        }
        if let Some(d) = o.output_dir {
            cfg.output_dir = d;
        }
        if let Some(t) = o.root_tol {
            cfg.tolerances.root_tol = t;
        }
        if let Some(r) = o.radius_factor {
            cfg.tolerances.radius_factor = r;
        }
        if let Some(s) = o.seed {
            cfg.seed = s;
        }
        if cfg.n_list.is_empty() {
            return Err(CliError::Usage("n_list is empty".into()));
        }
        Ok(cfg)
    }

    /// Rejects `n < min` in `n_list`.
    pub fn require_min_n(&self, min: usize) -> Result<(), CliError> {
        match self.n_list.iter().find(|&&n| n < min) {
            Some(n) => Err(CliError::Usage(format!("n = {n} is below the minimum {min} for this command"))),
            None => Ok(()),
        }
    }
}
