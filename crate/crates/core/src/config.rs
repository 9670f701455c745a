//! JSON run configuration shared by the command-line tools.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chain::ProbSeq;
use crate::error::{Error, Result};
use crate::numeration::BaseDef;
use crate::render::GridSpec;
use crate::spectrum::{escape_radius, EscapeConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub coefficients: Vec<u64>,
    #[serde(default)]
    pub name: String,
}

impl Default for BaseSpec {
    fn default() -> Self {
        Self {
            coefficients: vec![1, 1],
            name: "fibonacci".into(),
        }
    }
}

impl BaseSpec {
    pub fn to_base(&self) -> Result<BaseDef> {
        BaseDef::new(self.coefficients.clone(), self.name.clone())
    }
}

/// Escape parameters; the radius defaults to `2/delta - 1 + margin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EscapeSettings {
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_max_level")]
    pub max_level: usize,
    #[serde(default = "default_true")]
    pub early_exit: bool,
}

fn default_margin() -> f64 {
    EscapeConfig::DEFAULT_MARGIN
}

fn default_max_level() -> usize {
    30
}

fn default_true() -> bool {
    true
}

impl Default for EscapeSettings {
    fn default() -> Self {
        Self {
            radius: None,
            margin: default_margin(),
            max_level: default_max_level(),
            early_exit: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub ppm: Option<PathBuf>,
    #[serde(default)]
    pub png: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Figure number the configuration reproduces, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<u32>,
    #[serde(default = "ProbSeq::all_ones")]
    pub prob_seq: ProbSeq,
    #[serde(default)]
    pub base: BaseSpec,
    #[serde(default)]
    pub escape: EscapeSettings,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            name: None,
            figure: None,
            prob_seq: ProbSeq::all_ones(),
            base: BaseSpec::default(),
            escape: EscapeSettings::default(),
            grid: GridSpec::default(),
            seed: 0,
            output: OutputPaths::default(),
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks everything except the escape radius, which only spectral
    /// commands need.
    pub fn validate(&self) -> Result<()> {
        self.prob_seq.validate()?;
        self.base.to_base()?;
        self.grid.validate()?;
        if let Some(r) = self.escape.radius {
            if !(r > 1.0 && r.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "escape radius {r} must exceed 1"
                )));
            }
        }
        if !(self.escape.margin.is_finite() && self.escape.margin >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "escape margin {} must be >= 0",
                self.escape.margin
            )));
        }
        Ok(())
    }

    /// Escape configuration; fails with `ZeroDelta` when the sequence
    /// accumulates at 0 and no radius is given.
    pub fn escape_config(&self) -> Result<EscapeConfig> {
        let radius = match self.escape.radius {
            Some(r) => r,
            None => escape_radius(&self.prob_seq, self.escape.margin)?,
        };
        EscapeConfig::new(radius, self.escape.max_level, self.escape.early_exit)
    }
}
