//! JSON run configuration.
//!
//! ```json
//! {
//!   "game": {"g": 0.25, "l": 0.25, "mode": "strict"},
//!   "theta": "1:0.75,3:0.25",
//!   "dynamics": "action",
//!   "tie": "dove",
//!   "seed": 7,
//!   "integrator": {"t_max": 10000, "tol": 1e-9},
//!   "abm": {"N": 1000, "horizon": 200, "replicates": 10}
//! }
//! ```
//!
//! Optional extras: `start` (`[p1, p2]`), `delta`, `basin_samples` and
//! `abm.without_replacement`.

use std::path::Path;

use hawkdove::abm::SimConfig;
use hawkdove::flow::IntegratorConfig;
use hawkdove::{DynamicsKind, Environment, Game64, SampleDistribution, State64, TieRule, ValidationMode};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    pub g: f64,
    pub l: f64,
    #[serde(default)]
    pub mode: ValidationMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            t_max: default_t_max(),
            tol: default_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbmSection {
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(default)]
    pub without_replacement: bool,
}

impl Default for AbmSection {
    fn default() -> Self {
        Self {
            n: default_n(),
            horizon: default_horizon(),
            replicates: default_replicates(),
            without_replacement: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub game: GameConfig,
    pub theta: String,
    #[serde(default = "default_dynamics")]
    pub dynamics: DynamicsKind,
    #[serde(default)]
    pub tie: TieRule,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub abm: AbmSection,
    #[serde(default = "default_start")]
    pub start: [f64; 2],
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_basin_samples")]
    pub basin_samples: usize,
}

fn default_t_max() -> f64 {
    1e4
}
fn default_tol() -> f64 {
    1e-9
}
fn default_n() -> usize {
    1000
}
fn default_horizon() -> usize {
    200
}
fn default_replicates() -> u64 {
    10
}
fn default_dynamics() -> DynamicsKind {
    DynamicsKind::ActionSampling
}
fn default_start() -> [f64; 2] {
    [0.3, 0.6]
}
fn default_delta() -> f64 {
    1.0
}
fn default_basin_samples() -> usize {
    400
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Checks everything that can be checked without running anything.
    pub fn validate(&self) -> Result<(), CliError> {
        self.environment()?;
        self.start_state()?;
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(CliError::Config(format!("delta {} must be positive", self.delta)));
        }
        let it = &self.integrator;
        if !(it.t_max.is_finite() && it.t_max > 0.0 && it.tol.is_finite() && it.tol > 0.0) {
            return Err(CliError::Config("integrator t_max and tol must be positive".into()));
        }
        self.sim_config()?.validate()?;
        Ok(())
    }

    pub fn game(&self) -> Result<Game64, CliError> {
        Ok(Game64::with_mode(self.game.g, self.game.l, self.game.mode)?)
    }

    pub fn theta(&self) -> Result<SampleDistribution<f64>, CliError> {
        Ok(SampleDistribution::parse(&self.theta)?)
    }

    pub fn environment(&self) -> Result<Environment<f64>, CliError> {
        Ok(Environment::new(self.game()?, self.theta()?, self.dynamics).with_tie(self.tie))
    }

    pub fn start_state(&self) -> Result<State64, CliError> {
        Ok(State64::new(self.start[0], self.start[1])?)
    }

    pub fn integrator(&self) -> IntegratorConfig<f64> {
        IntegratorConfig {
            delta: self.delta,
            t_max: self.integrator.t_max,
            tol: self.integrator.tol,
            record_every: 1,
        }
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let mut sim = SimConfig::new(
            self.environment()?,
            self.abm.n,
            self.abm.horizon,
            self.seed,
            (self.start[0], self.start[1]),
        );
        sim.without_replacement = self.abm.without_replacement;
        Ok(sim)
    }
}
