use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{check_delta, Error, Result};
use crate::tail_estimation::{ScanOptions, SelectionRule, DEFAULT_K_MIN};
use crate::Model;

/// A replication sweep over a `(δ, n)` grid.
///
/// Stored as TOML key-value pairs:
///
/// ```toml
/// model = "B"
/// deltas = [-0.5, 0.0, 0.5]
/// ns = [10000]
/// reps = 100
/// seed = 2019
/// k_min = 5
/// rule = "plfit"
/// output_dir = "sweep"
/// workers = 0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    pub deltas: Vec<f64>,
    pub ns: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    #[serde(default = "default_k_min")]
    pub k_min: usize,
    #[serde(default)]
    pub rule: SelectionRule,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// 0 uses every available core
    #[serde(default)]
    pub workers: usize,
}

fn default_k_min() -> usize {
    DEFAULT_K_MIN
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.deltas.is_empty() || self.ns.is_empty() {
            return Err(Error::Config("deltas and ns must be nonempty".into()));
        }
        for &d in &self.deltas {
            check_delta(d).map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(n) = self.ns.iter().find(|&&n| n < self.k_min + 2) {
            return Err(Error::Config(format!("n = {n} is too small for k_min = {}", self.k_min)));
        }
        Ok(())
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            k_min: self.k_min,
            k_max: None,
            rule: self.rule,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Canonical serialization; identical configs serialize identically.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization, hex encoded. The output
    /// directory and worker count do not affect results and are excluded.
    pub fn hash(&self) -> String {
        let mut canon = self.clone();
        canon.output_dir = PathBuf::new();
        canon.workers = 0;
        let digest = Sha256::digest(canon.to_toml_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
