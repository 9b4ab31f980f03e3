//! Per-scale reward cell with reverse-replay and TD learning.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::place::ActivitySnapshot;

pub const REWARD_EPSILON: f64 = 1e-4;

/// Reward cell reading every place cell of one scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardCell {
    pub weights: Vec<f64>,
    pub epsilon: f64,
    /// Upper bound on the firing rate.
    pub cap: f64,
}

impl RewardCell {
    pub fn new(n_p: usize, cap: f64) -> Self {
        Self {
            weights: vec![0.0; n_p],
            epsilon: REWARD_EPSILON,
            cap,
        }
    }

    /// `w·v / max(‖v‖₁, ε)`, unrectified and uncapped.
    pub fn ratio(&self, rates: &[f64]) -> f64 {
        debug_assert_eq!(rates.len(), self.weights.len());
        let num: f64 = self.weights.iter().zip(rates).map(|(w, v)| w * v).sum();
        let l1: f64 = rates.iter().map(|v| v.abs()).sum();
        num / l1.max(self.epsilon)
    }

    /// Rectified, capped reward-cell rate.
    pub fn activation(&self, rates: &[f64]) -> f64 {
        self.ratio(rates).max(0.0).min(self.cap)
    }

    /// Accumulate replayed activity from the most recent snapshot backwards,
    /// decaying by `exp(−t_r/τ_r)`, then add the max-normalised accumulator
    /// to the weights. Silent snapshots are skipped without advancing `t_r`.
    pub fn reverse_replay(&mut self, buffer: &ReplayBuffer, tau_r: f64) -> ReplayOutcome {
        if buffer.is_empty() {
            log::warn!("reverse replay requested with an empty buffer");
            return ReplayOutcome::EmptyBuffer;
        }
        let mut delta = vec![0.0; self.weights.len()];
        let mut t_r = 0u32;
        for snap in buffer.iter().rev() {
            let peak = snap.max_rate();
            if peak == 0.0 {
                continue;
            }
            let decay = (-(t_r as f64) / tau_r).exp();
            for &(i, v) in snap.active() {
                delta[i as usize] += v / peak * decay;
            }
            t_r += 1;
        }
        let norm = delta.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if norm == 0.0 {
            return ReplayOutcome::NoActivity;
        }
        for (w, d) in self.weights.iter_mut().zip(&delta) {
            *w += d / norm;
        }
        ReplayOutcome::Applied {
            replayed: t_r as usize,
        }
    }

    /// `δ = R − w·v`, `w ← max(w + η δ v, 0)`. Returns `δ`.
    pub fn td_update(&mut self, rates: &[f64], cfg: &TdConfig) -> f64 {
        let prediction: f64 = self.weights.iter().zip(rates).map(|(w, v)| w * v).sum();
        let delta = cfg.reward - prediction;
        for (w, &v) in self.weights.iter_mut().zip(rates) {
            *w = (*w + cfg.eta * delta * v).max(0.0);
        }
        delta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReplayOutcome {
    Applied { replayed: usize },
    EmptyBuffer,
    NoActivity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TdConfig {
    pub eta: f64,
    /// Observed reward for this update.
    pub reward: f64,
}

/// Chronological place-cell activity of the current episode, newest last.
#[derive(Clone, Debug, Default)]
pub struct ReplayBuffer {
    snapshots: VecDeque<ActivitySnapshot>,
    capacity: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay buffer capacity must be positive");
        Self {
            snapshots: VecDeque::with_capacity(capacity.min(4096)),
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Append, dropping the oldest snapshot once full.
    pub fn record(&mut self, snapshot: ActivitySnapshot) {
        if self.snapshots.len() == self.capacity {
            self.snapshots.pop_front();
        }
        self.snapshots.push_back(snapshot);
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn clear(&mut self) {
        self.snapshots.clear();
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &ActivitySnapshot> {
        self.snapshots.iter()
    }
}
