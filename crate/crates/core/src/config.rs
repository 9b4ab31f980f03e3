//! Declarative model and experiment configuration (TOML).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::navigator::{ExploreConfig, FusionConfig};
use crate::place::{PlaceParams, PlasticityConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldConfig {
    /// LiDAR beams per sweep.
    pub n_res: usize,
    /// Beam range cap; the arena diagonal when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_range: Option<f64>,
    /// Distance covered per simulation step, metres.
    pub step_len: f64,
    pub collision_margin: f64,
    pub n_hd: usize,
    /// Anchor-cue heading in radians.
    #[serde(default)]
    pub hd_anchor: f64,
    /// Simulated seconds per step, used for reported trial durations.
    pub seconds_per_step: f64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        Self {
            n_res: crate::world::DEFAULT_BEAMS,
            max_range: None,
            step_len: 0.1,
            collision_margin: crate::world::DEFAULT_COLLISION_MARGIN,
            n_hd: crate::orientation::DEFAULT_HD_CELLS,
            hd_anchor: 0.0,
            seconds_per_step: 0.064,
        }
    }
}

/// One BVC → place → reward stack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleConfig {
    pub name: String,
    pub sigma_r: f64,
    pub sigma_theta: f64,
    pub n_pc: usize,
    pub bvc_dirs: usize,
    pub bvc_dists: usize,
    /// Largest preferred BVC distance; half the arena diagonal when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bvc_max_dist: Option<f64>,
    /// BVC normalisation; the beam count when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_bvc_norm: Option<f64>,
    pub place: PlaceParams,
    /// Per-scale override of the Oja normalisation factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_pb: Option<f64>,
    /// Per-scale override of the BVC→PC learning time constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_w_pb: Option<f64>,
}

impl ScaleConfig {
    pub fn new(name: &str, sigma_r: f64, n_pc: usize) -> Self {
        Self {
            name: name.to_string(),
            sigma_r,
            sigma_theta: 0.2,
            n_pc,
            bvc_dirs: 8,
            bvc_dists: 12,
            bvc_max_dist: None,
            n_bvc_norm: None,
            place: PlaceParams::default(),
            alpha_pb: None,
            tau_w_pb: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardConfig {
    /// Replay decay constant, in replay steps.
    pub tau_r: f64,
    pub buffer_capacity: usize,
    /// TD learning rate.
    pub eta: f64,
    /// Reward-cell activation cap.
    pub cap: f64,
    /// Reward delivered on entering the goal.
    pub goal_reward: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            tau_r: 10.0,
            buffer_capacity: 10_000,
            eta: 0.1,
            cap: 100.0,
            goal_reward: 1.0,
        }
    }
}

/// Exploration settings as written in config files (angles in degrees).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExploreSection {
    pub sigma_turn_deg: f64,
    pub duration: u32,
    pub n_loop: usize,
    pub delta_loop: f64,
    pub max_resamples: u32,
}

impl Default for ExploreSection {
    fn default() -> Self {
        let e = ExploreConfig::default();
        Self {
            sigma_turn_deg: e.sigma_turn.to_degrees(),
            duration: e.duration,
            n_loop: e.n_loop,
            delta_loop: e.delta_loop,
            max_resamples: e.max_resamples,
        }
    }
}

impl From<ExploreSection> for ExploreConfig {
    fn from(s: ExploreSection) -> Self {
        ExploreConfig {
            sigma_turn: s.sigma_turn_deg.to_radians(),
            duration: s.duration,
            n_loop: s.n_loop,
            delta_loop: s.delta_loop,
            max_resamples: s.max_resamples,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub world: WorldConfig,
    pub plasticity: PlasticityConfig,
    pub reward: RewardConfig,
    pub fusion: FusionConfig,
    pub explore: ExploreSection,
    pub scales: Vec<ScaleConfig>,
}

impl ModelConfig {
    pub fn explore(&self) -> ExploreConfig {
        self.explore.into()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.scales.is_empty() {
            return bad("at least one scale is required".into());
        }
        if self.scales.len() > 63 {
            return bad("at most 63 scales are supported".into());
        }
        if self.world.n_res == 0 || self.world.n_hd < 2 {
            return bad("n_res must be positive and n_hd at least 2".into());
        }
        if !(self.world.step_len > 0.0) || self.world.collision_margin < 0.0 {
            return bad("step_len must be positive and collision_margin non-negative".into());
        }
        self.plasticity.validate().map_err(ConfigError::Invalid)?;
        for s in &self.scales {
            if !(s.sigma_r > 0.0 && s.sigma_theta > 0.0) {
                return bad(format!("scale {}: tuning widths must be positive", s.name));
            }
            if s.n_pc == 0 || s.bvc_dirs == 0 || s.bvc_dists == 0 {
                return bad(format!("scale {}: cell counts must be positive", s.name));
            }
            if !(s.place.tau_p > 0.0 && s.place.psi > 0.0) {
                return bad(format!("scale {}: tau_p and psi must be positive", s.name));
            }
            if s.alpha_pb.is_some_and(|a| !(a > 0.0)) || s.tau_w_pb.is_some_and(|t| !(t > 0.0)) {
                return bad(format!("scale {}: plasticity overrides must be positive", s.name));
            }
            if s.place.gamma_pb < 0.0 || s.place.gamma_pp < 0.0 {
                return bad(format!("scale {}: inhibition gains must be non-negative", s.name));
            }
        }
        if !(self.reward.tau_r > 0.0 && self.reward.eta > 0.0 && self.reward.cap > 0.0) {
            return bad("tau_r, eta and cap must be positive".into());
        }
        if self.reward.buffer_capacity == 0 {
            return bad("buffer_capacity must be positive".into());
        }
        if !(self.fusion.validity_threshold > 0.0) || self.fusion.d_safe < 0.0 {
            return bad("validity_threshold must be positive and d_safe non-negative".into());
        }
        Ok(())
    }

    pub fn scale_index(&self, name: &str) -> Option<usize> {
        self.scales.iter().position(|s| s.name == name)
    }
}

/// Mapping and goal-seeking budgets shared by the experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment1Config {
    pub environments: Vec<String>,
    pub mapping_steps: u64,
    /// Step cap of the single learning episode that forms the reward map.
    pub learning_max_steps: u64,
    pub trials: usize,
    pub max_steps: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment2Config {
    pub environment: String,
    pub episodes: usize,
    pub runs: usize,
    /// Per-episode step cap standing in for a simulated-time timeout.
    pub max_steps: u64,
    /// Leading episodes excluded from the converged mean.
    pub skip_episodes: usize,
    pub seed: u64,
}

/// A full configuration document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: ModelConfig,
    /// Strategy name → scale names used for decisions.
    pub strategies: Vec<StrategyEntry>,
    pub experiment1: Experiment1Config,
    pub experiment2: Experiment2Config,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyEntry {
    pub name: String,
    pub scales: Vec<String>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Config = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialises to TOML")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.model.validate()?;
        if self.strategies.is_empty() {
            return Err(ConfigError::Invalid("no strategies configured".into()));
        }
        for s in &self.strategies {
            if s.scales.is_empty() {
                return Err(ConfigError::Invalid(format!("strategy {} lists no scales", s.name)));
            }
            for name in &s.scales {
                if self.model.scale_index(name).is_none() {
                    return Err(ConfigError::Invalid(format!(
                        "strategy {} references unknown scale {name}",
                        s.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Resolve an arena path listed in this document against the directory
    /// of the file it was loaded from. Absolute paths pass through.
    pub fn resolve(config_path: impl AsRef<Path>, entry: &str) -> PathBuf {
        let entry = Path::new(entry);
        if entry.is_absolute() {
            return entry.to_path_buf();
        }
        config_path
            .as_ref()
            .parent()
            .map_or_else(|| entry.to_path_buf(), |dir| dir.join(entry))
    }

    /// Short SHA-256 of the canonical TOML rendering.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        hex::encode(&digest[..8])
    }
}
