//! Closed-loop action selection: preplay, per-scale reward prediction,
//! variation-weighted fusion, obstacle masking and exploration control.

mod fusion;
mod mode;

pub use fusion::{
    action_angle, fuse, heading_clearance, mixing_weights, normalize_profile, obstacle_mask,
    preplay, scale_q, validity_set, variation, DEGENERATE_RESULTANT,
};
pub use mode::{explore_step, ExploreConfig, LoopStatus, Mode, ModeState};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::place::AdjacencyTensor;
use crate::valuation::RewardCell;
use crate::world::LidarScan;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    /// A scale takes part in the decision only if its best raw prediction
    /// exceeds this.
    pub validity_threshold: f64,
    /// Headings whose cone clearance falls below this are masked, metres.
    pub d_safe: f64,
    pub epsilon: f64,
    /// Include the last→first heading pair in the variation sum.
    pub wraparound: bool,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            validity_threshold: 1e-3,
            d_safe: 0.3,
            epsilon: 1e-4,
            wraparound: false,
        }
    }
}

/// Read-only view of what one scale contributes to a decision.
#[derive(Clone, Copy)]
pub struct ScaleView<'a> {
    pub adjacency: &'a AdjacencyTensor,
    pub reward: &'a RewardCell,
    pub rates: &'a [f64],
}

/// Everything computed on the way to a heading. Per-scale vectors follow the
/// order of the views passed to [`evaluate`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FusedProfile {
    /// Raw predictions `Q_k(θ_d)`.
    pub q: Vec<Vec<f64>>,
    /// Normalised (and, for fusion, masked) predictions `Q̃_k(θ_d)`.
    pub q_norm: Vec<Vec<f64>>,
    pub variation: Vec<f64>,
    /// Mixing weight per scale; zero outside the validity set.
    pub alpha: Vec<f64>,
    pub valid: Vec<usize>,
    pub masked: Vec<bool>,
    pub fused: Vec<f64>,
    pub theta: Option<f64>,
}

impl FusedProfile {
    /// Every heading masked.
    pub fn blocked(&self) -> bool {
        !self.masked.is_empty() && self.masked.iter().all(|&m| m)
    }

    /// Scale with the largest mixing weight, if any is valid.
    pub fn dominant(&self) -> Option<usize> {
        self.valid.iter().copied().fold(None, |best: Option<usize>, k| match best {
            Some(b) if self.alpha[b] >= self.alpha[k] => Some(b),
            _ => Some(k),
        })
    }

    pub fn valid_mask(&self) -> u64 {
        self.valid.iter().fold(0, |m, &k| m | (1 << k))
    }

    pub fn masked_bits(&self) -> u64 {
        self.masked
            .iter()
            .enumerate()
            .fold(0, |m, (d, &b)| if b { m | (1 << d) } else { m })
    }
}

/// Build the fused profile for the given scales. Pure: nothing is mutated.
pub fn evaluate(scales: &[ScaleView<'_>], scan: &LidarScan, cfg: &FusionConfig) -> FusedProfile {
    let n_hd = scales.first().map_or(0, |s| s.adjacency.n_headings());
    let q: Vec<Vec<f64>> = scales
        .par_iter()
        .map(|s| {
            (0..n_hd)
                .map(|a| scale_q(s.reward, &preplay(s.adjacency, s.rates, a)))
                .collect()
        })
        .collect();
    let maxima: Vec<f64> = q
        .iter()
        .map(|p| p.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let valid = validity_set(&maxima, cfg.validity_threshold);
    let mut q_norm: Vec<Vec<f64>> = q.iter().map(|p| normalize_profile(p, cfg.epsilon)).collect();

    let mut variations = vec![0.0; scales.len()];
    for &k in &valid {
        variations[k] = variation(&q_norm[k], cfg.wraparound);
    }
    let valid_v: Vec<f64> = valid.iter().map(|&k| variations[k]).collect();
    let mut alpha = vec![0.0; scales.len()];
    for (&k, a) in valid.iter().zip(mixing_weights(&valid_v, cfg.epsilon)) {
        alpha[k] = a;
    }

    let clearance = heading_clearance(scan, n_hd);
    let masked = obstacle_mask(&mut q_norm, &clearance, cfg.d_safe);
    let fused = fuse(&q_norm, &alpha, &valid);
    let theta = if valid.is_empty() { None } else { action_angle(&fused) };
    FusedProfile {
        q,
        q_norm,
        variation: variations,
        alpha,
        valid,
        masked,
        fused,
        theta,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    /// Move along this continuous heading.
    Move(f64),
    /// Fall back to the random walk.
    Explore,
}

/// One exploitation decision. When no scale is valid, the circular mean is
/// degenerate or every heading is masked, the mode switches to exploration
/// for `explore_steps` ticks.
pub fn decide(
    scales: &[ScaleView<'_>],
    scan: &LidarScan,
    mode: &mut ModeState,
    cfg: &FusionConfig,
    explore_steps: u32,
) -> (Action, FusedProfile) {
    let profile = evaluate(scales, scan, cfg);
    match profile.theta {
        Some(theta) if !profile.blocked() => (Action::Move(theta), profile),
        _ => {
            mode.start_exploring(explore_steps);
            (Action::Explore, profile)
        }
    }
}
