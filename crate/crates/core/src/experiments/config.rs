use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{BudgetBounds, SearchSettings, MIN_GRID_POINTS, MIN_REPLICAS};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::model::{demand_dominance_warning, CostFunction, DemandModel, MinerProfile, PlatformParams};
use crate::sim::{MinerPolicy, Scenario};

/// One miner entry of an experiment file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinerConfig {
    pub capacity: f64,
    pub cost: CostFunction,
    /// Defaults to `Static` at full capacity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<MinerPolicy>,
}

/// Search settings shared by the best-response based commands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    /// IC tolerance in grid cells of `[0, A_i]`.
    #[serde(default = "default_tol_cells")]
    pub tol_cells: f64,
}

fn default_grid_points() -> usize {
    MIN_GRID_POINTS
}

fn default_tol_cells() -> f64 {
    2.0
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { grid_points: default_grid_points(), tol_cells: default_tol_cells() }
    }
}

fn default_rounds() -> u64 {
    10_000
}

fn default_replicas() -> u64 {
    10_000
}

/// A complete experiment, as read from a TOML document.
///
/// ```toml
/// seed = 7
/// rounds = 1000
/// replicas = 10000
/// mechanism = "pps"
///
/// [platform]
/// price = 1.0
/// base_reward = 1.0
/// productivity = 2.0
/// lambda = 0.8
/// window = 5
///
/// [demand]
/// family = "constant"
/// value = 100.0
///
/// [[miners]]
/// capacity = 1.0
/// cost = { family = "linear", rate = 0.5 }
/// policy = { kind = "static", allocation = 1.0 }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rounds")]
    pub rounds: u64,
    #[serde(default = "default_replicas")]
    pub replicas: u64,
    pub mechanism: Mechanism,
    pub platform: PlatformParams,
    pub demand: DemandModel,
    pub miners: Vec<MinerConfig>,
    #[serde(default)]
    pub audit: BudgetBounds,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

impl ExperimentConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization, in hex.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::invalid("rounds", "must be at least 1"));
        }
        if self.replicas < MIN_REPLICAS {
            return Err(Error::invalid(
                "replicas",
                format!("must be at least {MIN_REPLICAS}, got {}", self.replicas),
            ));
        }
        if self.analysis.grid_points < MIN_GRID_POINTS {
            return Err(Error::invalid(
                "analysis.grid_points",
                format!("must be at least {MIN_GRID_POINTS}, got {}", self.analysis.grid_points),
            ));
        }
        if !(self.analysis.tol_cells >= 0.0 && self.analysis.tol_cells.is_finite()) {
            return Err(Error::invalid("analysis.tol_cells", "must be finite and non-negative"));
        }
        self.audit.validate()?;
        self.scenario().validate()
    }

    pub fn profiles(&self) -> Vec<MinerProfile> {
        self.miners
            .iter()
            .enumerate()
            .map(|(id, m)| MinerProfile { id, capacity: m.capacity, cost: m.cost })
            .collect()
    }

    pub fn scenario(&self) -> Scenario {
        Scenario {
            params: self.platform,
            miners: self.profiles(),
            policies: self
                .miners
                .iter()
                .map(|m| m.policy.unwrap_or(MinerPolicy::Static { allocation: m.capacity }))
                .collect(),
            demand: self.demand,
            mechanism: self.mechanism,
            rounds: self.rounds,
        }
    }

    pub fn search(&self) -> SearchSettings {
        SearchSettings {
            grid_points: self.analysis.grid_points,
            replicas: self.replicas,
            seed: self.seed,
        }
    }

    /// Absolute IC tolerance for `miner`.
    pub fn tolerance(&self, miner: usize) -> f64 {
        self.analysis.tol_cells * self.miners[miner].capacity / (self.analysis.grid_points - 1) as f64
    }

    /// Non-fatal findings worth reporting on the diagnostic stream.
    pub fn warnings(&self) -> Vec<String> {
        demand_dominance_warning(&self.platform, &self.profiles(), &self.demand)
            .into_iter()
            .collect()
    }

    /// Returns a copy with the numeric field at dotted `path` set to
    /// `value`, e.g. `platform.lambda` or `miners.0.cost.rate`.
    pub fn with_field(&self, path: &str, value: f64) -> Result<Self> {
        let mut doc = toml::Value::try_from(self).expect("config serializes");
        let mut slot = &mut doc;
        for key in path.split('.') {
            let next = match slot {
                toml::Value::Table(t) => t.get_mut(key),
                toml::Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
                _ => None,
            };
            slot = next.ok_or_else(|| Error::invalid(path, "no such field"))?;
        }
        *slot = match slot {
            toml::Value::Float(_) => toml::Value::Float(value),
            toml::Value::Integer(_) if value.fract() == 0.0 && value >= 0.0 => {
                toml::Value::Integer(value as i64)
            }
            toml::Value::Integer(_) => return Err(Error::invalid(path, format!("needs an integer, got {value}"))),
            _ => return Err(Error::invalid(path, "not a numeric field")),
        };
        let config: Self = doc.try_into().map_err(|e: toml::de::Error| Error::ConfigParse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}
