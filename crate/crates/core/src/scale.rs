//! One spatial scale: BVC layer, place layer, traces, adjacency tensor,
//! reward cell and replay buffer.

use crate::bvc::BvcLayer;
use crate::config::{ModelConfig, ScaleConfig};
use crate::navigator::ScaleView;
use crate::place::{AdjacencyTensor, PlaceLayer, PlasticityConfig, TraceState};
use crate::valuation::{ReplayBuffer, ReplayOutcome, RewardCell, TdConfig};
use crate::world::{EnvironmentSpec, LidarScan};

#[derive(Clone, Debug)]
pub struct ScaleStack {
    pub name: String,
    pub bvc: BvcLayer,
    pub place: PlaceLayer,
    pub traces: TraceState,
    pub adjacency: AdjacencyTensor,
    pub reward: RewardCell,
    pub buffer: ReplayBuffer,
    pub plasticity: PlasticityConfig,
    /// BVC rates from the most recent sensory update.
    pub bvc_rates: Vec<f64>,
}

/// Which weights may change during a tick.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Plasticity {
    /// BVC→PC weights and the adjacency tensor.
    pub place: bool,
    /// Reward weights (replay and TD at the goal).
    pub reward: bool,
}

impl Plasticity {
    pub const FROZEN: Self = Self {
        place: false,
        reward: false,
    };
    pub const MAPPING: Self = Self {
        place: true,
        reward: false,
    };
    pub const ALL: Self = Self {
        place: true,
        reward: true,
    };
}

impl ScaleStack {
    pub fn new(cfg: &ScaleConfig, model: &ModelConfig, env: &EnvironmentSpec, seed: u64) -> Self {
        let max_dist = cfg.bvc_max_dist.unwrap_or(0.5 * env.diagonal());
        let norm = cfg.n_bvc_norm.unwrap_or(model.world.n_res as f64);
        let bvc = BvcLayer::grid(
            cfg.bvc_dirs,
            cfg.bvc_dists,
            max_dist,
            cfg.sigma_r,
            cfg.sigma_theta,
            norm,
        );
        let mut plasticity = model.plasticity;
        if let Some(a) = cfg.alpha_pb {
            plasticity.alpha_pb = a;
        }
        if let Some(t) = cfg.tau_w_pb {
            plasticity.tau_w_pb = t;
        }
        let place = PlaceLayer::new(cfg.n_pc, bvc.len(), cfg.place, plasticity.p_pb, seed);
        let n_hd = model.world.n_hd;
        Self {
            name: cfg.name.clone(),
            traces: TraceState::new(cfg.n_pc, n_hd),
            adjacency: AdjacencyTensor::new(n_hd, cfg.n_pc),
            reward: RewardCell::new(cfg.n_pc, model.reward.cap),
            buffer: ReplayBuffer::new(model.reward.buffer_capacity),
            bvc_rates: vec![0.0; bvc.len()],
            bvc,
            place,
            plasticity,
        }
    }

    /// Sensory update: BVC rates from the scan, then one place-layer step.
    /// With `learn`, the Oja rule, the adjacency rule and the traces advance
    /// as well (adjacency reads the traces from before this step).
    pub fn tick(&mut self, scan: &LidarScan, hd_rates: &[f64], learn: bool) {
        let dt = self.plasticity.dt;
        self.bvc_rates = self.bvc.rates(scan);
        self.place.step(&self.bvc_rates, dt);
        if learn {
            self.place.oja_update(&self.bvc_rates, dt, &self.plasticity);
            self.adjacency
                .update(&self.place.rates, &self.traces, dt, self.plasticity.tau_w_pp);
            self.traces
                .step(&self.place.rates, hd_rates, dt, self.plasticity.tau_m);
        }
    }

    pub fn record(&mut self, step: u64) {
        let snap = self.place.snapshot(step);
        self.buffer.record(snap);
    }

    /// Reverse replay of the buffer followed by one TD step on the current
    /// place-cell pattern.
    pub fn reward_goal(&mut self, tau_r: f64, td: &TdConfig) -> ReplayOutcome {
        let outcome = self.reward.reverse_replay(&self.buffer, tau_r);
        self.reward.td_update(&self.place.rates, td);
        outcome
    }

    /// Clear membrane, rates, traces and the replay buffer for a new episode.
    pub fn reset_episode(&mut self) {
        self.place.reset_activity();
        self.traces.reset();
        self.buffer.clear();
    }

    pub fn view(&self) -> ScaleView<'_> {
        ScaleView {
            adjacency: &self.adjacency,
            reward: &self.reward,
            rates: &self.place.rates,
        }
    }

    /// Place-cell rates after `iters` steps on a fixed scan from rest,
    /// without touching this stack.
    pub fn settled_rates(&self, scan: &LidarScan, iters: usize) -> Vec<f64> {
        let bvc = self.bvc.rates(scan);
        let mut layer = self.place.clone();
        layer.reset_activity();
        for _ in 0..iters {
            layer.step(&bvc, self.plasticity.dt);
        }
        layer.rates
    }
}

/// Build one stack per configured scale. Scale `k` seeds its weights with
/// `seed + k`.
pub fn build_stacks(model: &ModelConfig, env: &EnvironmentSpec, seed: u64) -> Vec<ScaleStack> {
    model
        .scales
        .iter()
        .enumerate()
        .map(|(k, s)| ScaleStack::new(s, model, env, seed.wrapping_add(k as u64)))
        .collect()
}
