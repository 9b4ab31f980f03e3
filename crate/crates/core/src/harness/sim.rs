//! The sense → learn → decide → move loop.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ModelConfig;
use crate::navigator::{decide, explore_step, Action, LoopStatus, Mode, ModeState, ScaleView};
use crate::orientation::HeadDirectionLayer;
use crate::scale::{Plasticity, ScaleStack};
use crate::valuation::TdConfig;
use crate::world::{in_goal, raycast, step_agent, AgentState, EnvironmentSpec};

/// How an episode is driven.
#[derive(Clone, Debug)]
pub struct EpisodeSettings {
    pub max_steps: u64,
    pub plasticity: Plasticity,
    /// Scale indices consulted for decisions.
    pub decision_scales: Vec<usize>,
    /// Pure random walk that ignores the goal.
    pub mapping: bool,
    pub seed: u64,
    /// Keep a per-step decision log.
    pub log: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepLog {
    pub step: u64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub mode: &'static str,
    pub valid_mask: u64,
    /// Mixing weight of every configured scale, `;`-separated.
    pub alpha: String,
    pub dominant: Option<usize>,
    pub theta: Option<f64>,
    pub masked: u64,
}

#[derive(Clone, Debug)]
pub struct EpisodeResult {
    pub steps: u64,
    pub reached_goal: bool,
    pub final_state: AgentState,
    /// Ticks spent in exploration mode.
    pub explore_steps: u64,
    pub log: Vec<StepLog>,
}

/// Run one episode from the environment's start pose. Activity, traces and
/// replay buffers are cleared first; weights persist in `stacks`.
///
/// `steps` counts ticks, including the one on which the goal is detected.
pub fn run_episode(
    stacks: &mut [ScaleStack],
    env: &EnvironmentSpec,
    model: &ModelConfig,
    settings: &EpisodeSettings,
) -> EpisodeResult {
    let world = &model.world;
    let explore = model.explore();
    let hd = HeadDirectionLayer::new(world.n_hd, world.hd_anchor);
    let max_range = world.max_range.unwrap_or_else(|| env.diagonal());
    let td = TdConfig {
        eta: model.reward.eta,
        reward: model.reward.goal_reward,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut state = AgentState::at(env.start.position, env.start.heading);
    let mut mode = ModeState::new(if settings.mapping {
        Mode::Exploring
    } else {
        Mode::Exploiting
    });
    let mut log = Vec::new();
    let mut explore_steps = 0;
    stacks.iter_mut().for_each(ScaleStack::reset_episode);

    for t in 1..=settings.max_steps {
        let scan = raycast(env, &state, world.n_res, max_range)
            .expect("agent kinematics keep the agent inside the arena");
        let hd_rates = hd.rates(state.velocity);
        let learn = settings.plasticity.place;
        stacks
            .par_iter_mut()
            .for_each(|s| s.tick(&scan, &hd_rates, learn));
        if settings.plasticity.reward {
            stacks.iter_mut().for_each(|s| s.record(t));
        }

        if !settings.mapping && in_goal(&state, env) {
            if settings.plasticity.reward {
                for s in stacks.iter_mut() {
                    s.reward_goal(model.reward.tau_r, &td);
                }
            }
            return EpisodeResult {
                steps: t,
                reached_goal: true,
                final_state: state,
                explore_steps,
                log,
            };
        }

        let mut profile = None;
        if mode.mode == Mode::Exploiting && !settings.mapping {
            let views: Vec<ScaleView<'_>> =
                settings.decision_scales.iter().map(|&k| stacks[k].view()).collect();
            let (action, p) = decide(&views, &scan, &mut mode, &model.fusion, explore.duration);
            profile = Some(p);
            if let Action::Move(theta) = action {
                state = step_agent(env, &state, theta, world.step_len, world.collision_margin);
                if mode.loop_guard(state.position, theta, &explore) == LoopStatus::Triggered {
                    log::debug!("loop detected at step {t}");
                }
            }
        }
        let exploring = mode.mode == Mode::Exploring;
        if exploring {
            explore_steps += 1;
            let heading = explore_step(
                state.heading,
                &mut rng,
                &scan,
                world.n_hd,
                model.fusion.d_safe,
                &explore,
            );
            state = step_agent(env, &state, heading, world.step_len, world.collision_margin);
            mode.tick(!settings.mapping);
        }

        if settings.log {
            let n_scales = stacks.len();
            let mut alpha = vec![0.0; n_scales];
            let (mut valid_mask, mut dominant, mut theta, mut masked) = (0, None, None, 0);
            if let Some(p) = &profile {
                for (local, &k) in settings.decision_scales.iter().enumerate() {
                    alpha[k] = p.alpha[local];
                    if p.valid.contains(&local) {
                        valid_mask |= 1 << k;
                    }
                }
                dominant = p.dominant().map(|l| settings.decision_scales[l]);
                theta = p.theta;
                masked = p.masked_bits();
            }
            log.push(StepLog {
                step: t,
                x: state.position.x,
                y: state.position.y,
                heading: state.heading,
                mode: if exploring { "explore" } else { "exploit" },
                valid_mask,
                alpha: alpha.iter().map(|a| format!("{a:.6}")).collect::<Vec<_>>().join(";"),
                dominant,
                theta,
                masked,
            });
        }
    }
    EpisodeResult {
        steps: settings.max_steps,
        reached_goal: false,
        final_state: state,
        explore_steps,
        log,
    }
}
