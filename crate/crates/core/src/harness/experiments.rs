//! Mapping, goal seeking and the two experiment protocols.

use rayon::prelude::*;
use thiserror::Error;

use super::records::TrialRecord;
use super::sim::{run_episode, EpisodeResult, EpisodeSettings};
use super::stats::GroupStats;
use crate::config::{Config, ModelConfig};
use crate::scale::{build_stacks, Plasticity, ScaleStack};
use crate::snapshot::Snapshot;
use crate::world::EnvironmentSpec;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("mapping phase needs at least one step")]
    NoMappingSteps,
    #[error("unknown strategy {0}")]
    UnknownStrategy(String),
    #[error("expected {expected} environments, got {got}")]
    EnvironmentCount { expected: usize, got: usize },
}

/// Scales a strategy consults when deciding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategySpec {
    pub name: String,
    pub scales: Vec<usize>,
}

impl StrategySpec {
    /// Resolve the configured strategies to scale indices.
    pub fn from_config(cfg: &Config) -> Vec<Self> {
        cfg.strategies
            .iter()
            .map(|s| Self {
                name: s.name.clone(),
                scales: s
                    .scales
                    .iter()
                    .map(|n| cfg.model.scale_index(n).expect("validated config"))
                    .collect(),
            })
            .collect()
    }

    pub fn find(cfg: &Config, name: &str) -> Result<Self, HarnessError> {
        Self::from_config(cfg)
            .into_iter()
            .find(|s| s.name == name)
            .ok_or_else(|| HarnessError::UnknownStrategy(name.to_string()))
    }

    /// Every configured scale.
    pub fn all_scales(model: &ModelConfig) -> Self {
        Self {
            name: "multiscale".into(),
            scales: (0..model.scales.len()).collect(),
        }
    }
}

/// SplitMix64 finaliser folded over `parts`; used to give every run and
/// trial its own reproducible seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

/// Fresh stacks trained by a reward-free random walk of `steps` ticks.
pub fn run_mapping_phase(
    model: &ModelConfig,
    env: &EnvironmentSpec,
    steps: u64,
    seed: u64,
) -> Result<Vec<ScaleStack>, HarnessError> {
    let mut stacks = build_stacks(model, env, seed);
    map_stacks(&mut stacks, model, env, steps, seed)?;
    Ok(stacks)
}

/// Continue mapping existing stacks.
pub fn map_stacks(
    stacks: &mut [ScaleStack],
    model: &ModelConfig,
    env: &EnvironmentSpec,
    steps: u64,
    seed: u64,
) -> Result<EpisodeResult, HarnessError> {
    if steps == 0 {
        return Err(HarnessError::NoMappingSteps);
    }
    let settings = EpisodeSettings {
        max_steps: steps,
        plasticity: Plasticity::MAPPING,
        decision_scales: Vec::new(),
        mapping: true,
        seed,
        log: false,
    };
    Ok(run_episode(stacks, env, model, &settings))
}

/// One closed-loop episode towards the goal. With `learning` every weight is
/// plastic and reaching the goal triggers replay and TD; without it nothing
/// changes.
pub fn run_goal_seeking(
    stacks: &mut [ScaleStack],
    env: &EnvironmentSpec,
    model: &ModelConfig,
    strategy: &StrategySpec,
    max_steps: u64,
    learning: bool,
    seed: u64,
    log: bool,
) -> EpisodeResult {
    let settings = EpisodeSettings {
        max_steps,
        plasticity: if learning {
            Plasticity::ALL
        } else {
            Plasticity::FROZEN
        },
        decision_scales: strategy.scales.clone(),
        mapping: false,
        seed,
        log,
    };
    run_episode(stacks, env, model, &settings)
}

/// Frozen weights and the evaluation trials run against them in one arena.
#[derive(Clone, Debug)]
pub struct Experiment1Env {
    pub snapshot: Snapshot,
    pub snapshot_hash: String,
    pub learning: EpisodeResult,
    pub records: Vec<TrialRecord>,
}

/// Map each arena, learn the reward map in one goal-seeking episode, freeze,
/// then run the evaluation trials of every strategy from the same weights.
pub fn run_experiment1(cfg: &Config, envs: &[EnvironmentSpec]) -> Result<Vec<Experiment1Env>, HarnessError> {
    let ex = &cfg.experiment1;
    if envs.len() != ex.environments.len() {
        return Err(HarnessError::EnvironmentCount {
            expected: ex.environments.len(),
            got: envs.len(),
        });
    }
    let model = &cfg.model;
    let strategies = StrategySpec::from_config(cfg);
    let config_hash = cfg.hash();
    let mut out = Vec::with_capacity(envs.len());
    for (e, env) in envs.iter().enumerate() {
        let map_seed = derive_seed(ex.seed, &[e as u64, 0]);
        let mut stacks = run_mapping_phase(model, env, ex.mapping_steps, map_seed)?;
        let learning = run_goal_seeking(
            &mut stacks,
            env,
            model,
            &StrategySpec::all_scales(model),
            ex.learning_max_steps,
            true,
            derive_seed(ex.seed, &[e as u64, 1]),
            false,
        );
        log::info!(
            "{}: learning episode {} steps, goal {}",
            env.name,
            learning.steps,
            learning.reached_goal
        );
        let snapshot = Snapshot {
            model: model.clone(),
            env: env.clone(),
            stacks,
        };
        let snapshot_hash = snapshot.hash();
        let jobs: Vec<(usize, usize)> = (0..strategies.len())
            .flat_map(|s| (0..ex.trials).map(move |t| (s, t)))
            .collect();
        let records = jobs
            .par_iter()
            .map(|&(s, t)| {
                let strategy = &strategies[s];
                let seed = derive_seed(ex.seed, &[e as u64, 2, t as u64]);
                let mut stacks = snapshot.stacks.clone();
                let r = run_goal_seeking(&mut stacks, env, model, strategy, ex.max_steps, false, seed, false);
                TrialRecord {
                    strategy: strategy.name.clone(),
                    environment: env.name.clone(),
                    trial: t,
                    episode: 0,
                    step_count: r.steps,
                    reached_goal: r.reached_goal,
                    wall_time: r.steps as f64 * model.world.seconds_per_step,
                    seed,
                    config_hash: config_hash.clone(),
                    snapshot_hash: snapshot_hash.clone(),
                }
            })
            .collect();
        out.push(Experiment1Env {
            snapshot,
            snapshot_hash,
            learning,
            records,
        });
    }
    Ok(out)
}

/// Per-strategy learning curves of Experiment 2.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment2Output {
    pub records: Vec<TrialRecord>,
    /// `(strategy, ΔSteps)`: differences of successive episode-wise means.
    pub delta_steps: Vec<(String, Vec<f64>)>,
}

/// Every strategy learns from scratch over `episodes` episodes in each of
/// `runs` seeded runs, with all weights plastic. Run `r` uses the same
/// weight seed and exploration seeds for every strategy.
pub fn run_experiment2(cfg: &Config, env: &EnvironmentSpec) -> Experiment2Output {
    let ex = &cfg.experiment2;
    let model = &cfg.model;
    let strategies = StrategySpec::from_config(cfg);
    let config_hash = cfg.hash();
    let jobs: Vec<(usize, usize)> = (0..strategies.len())
        .flat_map(|s| (0..ex.runs).map(move |r| (s, r)))
        .collect();
    let per_job: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(s, run)| {
            let strategy = &strategies[s];
            let mut stacks = build_stacks(model, env, derive_seed(ex.seed, &[run as u64]));
            (0..ex.episodes)
                .map(|episode| {
                    let seed = derive_seed(ex.seed, &[run as u64, episode as u64 + 1]);
                    let r = run_goal_seeking(&mut stacks, env, model, strategy, ex.max_steps, true, seed, false);
                    TrialRecord {
                        strategy: strategy.name.clone(),
                        environment: env.name.clone(),
                        trial: run,
                        episode,
                        step_count: r.steps,
                        reached_goal: r.reached_goal,
                        wall_time: r.steps as f64 * model.world.seconds_per_step,
                        seed,
                        config_hash: config_hash.clone(),
                        snapshot_hash: String::new(),
                    }
                })
                .collect()
        })
        .collect();
    let records: Vec<TrialRecord> = per_job.into_iter().flatten().collect();
    let delta_steps = strategies
        .iter()
        .map(|s| (s.name.clone(), delta_steps(&episode_means(&records, &s.name, ex.episodes))))
        .collect();
    Experiment2Output { records, delta_steps }
}

/// Mean step count of each episode index across runs.
pub fn episode_means(records: &[TrialRecord], strategy: &str, episodes: usize) -> Vec<f64> {
    (0..episodes)
        .map(|e| {
            let v: Vec<f64> = records
                .iter()
                .filter(|r| r.strategy == strategy && r.episode == e)
                .map(|r| r.step_count as f64)
                .collect();
            v.iter().sum::<f64>() / v.len().max(1) as f64
        })
        .collect()
}

pub fn delta_steps(means: &[f64]) -> Vec<f64> {
    means.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Step counts of one strategy over episodes `from..`, pooled across runs.
pub fn converged_steps(records: &[TrialRecord], strategy: &str, from: usize) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.strategy == strategy && r.episode >= from)
        .map(|r| r.step_count as f64)
        .collect()
}

/// Per-run mean over episodes `from..`, then mean and SEM across runs.
pub fn converged_summary(records: &[TrialRecord], strategy: &str, from: usize) -> GroupStats {
    let mut runs: Vec<usize> = records
        .iter()
        .filter(|r| r.strategy == strategy)
        .map(|r| r.trial)
        .collect();
    runs.sort_unstable();
    runs.dedup();
    let means: Vec<f64> = runs
        .iter()
        .map(|&run| {
            let v: Vec<f64> = records
                .iter()
                .filter(|r| r.strategy == strategy && r.trial == run && r.episode >= from)
                .map(|r| r.step_count as f64)
                .collect();
            v.iter().sum::<f64>() / v.len().max(1) as f64
        })
        .collect();
    GroupStats::of(&means)
}
