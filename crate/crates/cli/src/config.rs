use std::path::{Path, PathBuf};

use cupcheck::funcs::TestFunctionSpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Everything an experiment run needs. Loaded from TOML, then overridden by flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<TestFunctionSpec>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub p: Option<f64>,
    /// `gaussian` or `cauchy` (isoperimetry); `cauchy`, `gaussian`, `sphere`, `ball` (sample).
    pub measure: Option<String>,
    /// `halfspace:<offset>` or `ball:<radius>`.
    pub set: Option<String>,
    pub alphas: Option<Vec<f64>>,
    pub t_grid: Option<Vec<f64>>,
    /// `power` (default) or `exp`.
    pub psi: Option<String>,
    pub cells: Option<usize>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub quick: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub json_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
    pub plot_path: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_COUNT: usize = 1_000_000;
/// `--quick` divides sample counts by this.
pub const QUICK_DIVISOR: usize = 100;

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    /// Fields set in `other` win.
    pub fn overlay(mut self, other: ExperimentConfig) -> Self {
        macro_rules! take {
            ($($field:ident).+) => {
                if other.$($field).+.is_some() {
                    self.$($field).+ = other.$($field).+;
                }
            };
        }
        take!(experiment);
        take!(params.n);
        take!(params.alpha);
        take!(params.beta);
        take!(params.p);
        take!(params.measure);
        take!(params.set);
        take!(params.alphas);
        take!(params.t_grid);
        take!(params.psi);
        take!(params.cells);
        take!(params.nodes);
        take!(sampling.count);
        take!(sampling.seed);
        take!(sampling.quick);
        take!(outputs.json_path);
        take!(outputs.csv_path);
        take!(outputs.plot_path);
        if !other.functions.is_empty() {
            self.functions = other.functions;
        }
        self
    }

    pub fn seed(&self) -> u64 {
        self.sampling.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn quick(&self) -> bool {
        self.sampling.quick.unwrap_or(false)
    }

    /// Sample count after `--quick`, never below the engine minimum.
    pub fn count(&self, default: usize) -> usize {
        let base = self.sampling.count.unwrap_or(default);
        if self.quick() {
            (base / QUICK_DIVISOR).max(cupcheck::verify::MIN_COUNT)
        } else {
            base
        }
    }
}

/// Parses `1e2,1e3, 1e4`.
pub fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number")))
        .collect()
}
