//! Experiment orchestration, statistics and result persistence.

pub mod analysis;
pub mod experiments;
pub mod heatmap;
pub mod records;
pub mod sim;
pub mod stats;

pub use experiments::{
    converged_steps, converged_summary, delta_steps, derive_seed, episode_means, map_stacks,
    run_experiment1, run_experiment2, run_goal_seeking, run_mapping_phase, Experiment1Env,
    Experiment2Output, HarnessError, StrategySpec,
};
pub use heatmap::FieldGrid;
pub use records::{load_records, save_records, TrialRecord};
pub use sim::{run_episode, EpisodeResult, EpisodeSettings, StepLog};
pub use stats::{summarize, GroupStats, StatsError, StatsSummary};
