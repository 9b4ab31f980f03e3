//! The stateless operators of multiscale action selection.

use std::f64::consts::PI;

use crate::orientation::basis_headings;
use crate::place::AdjacencyTensor;
use crate::valuation::RewardCell;
use crate::world::{wrap_positive, LidarScan};

/// Resultant components below this magnitude count as no preferred heading.
pub const DEGENERATE_RESULTANT: f64 = 1e-12;

/// Predicted place-cell activity after a one-step move along basis heading `a`:
/// `tanh([Σ_{j≠i} W[a][i][j] vⱼ − vᵢ]₊)`.
pub fn preplay(adjacency: &AdjacencyTensor, rates: &[f64], a: usize) -> Vec<f64> {
    assert!(a < adjacency.n_headings(), "heading index {a} out of range");
    adjacency
        .drive(a, rates)
        .into_iter()
        .zip(rates)
        .map(|(d, &v)| (d - v).max(0.0).tanh())
        .collect()
}

/// Reward estimate of a predicted pattern (uncapped activation ratio).
pub fn scale_q(cell: &RewardCell, predicted: &[f64]) -> f64 {
    cell.ratio(predicted)
}

pub fn normalize_profile(q: &[f64], epsilon: f64) -> Vec<f64> {
    let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    q.iter().map(|&x| x / (max + epsilon)).collect()
}

/// Sum of absolute differences between consecutive headings. With
/// `wraparound` the last→first pair is included as well.
pub fn variation(profile: &[f64], wraparound: bool) -> f64 {
    let mut v: f64 = profile.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    if wraparound && profile.len() > 1 {
        v += (profile[0] - profile[profile.len() - 1]).abs();
    }
    v
}

/// `αₖ = Vₖ / (Σ V + ε)` over the valid scales.
pub fn mixing_weights(variations: &[f64], epsilon: f64) -> Vec<f64> {
    let total: f64 = variations.iter().sum();
    variations.iter().map(|&v| v / (total + epsilon)).collect()
}

/// `Q(θ) = Σ αₖ Q̃ₖ(θ)` over the listed scales. `profiles` and `alpha` are
/// indexed by scale; scales absent from `valid` contribute nothing.
pub fn fuse(profiles: &[Vec<f64>], alpha: &[f64], valid: &[usize]) -> Vec<f64> {
    let n = profiles.first().map_or(0, Vec::len);
    let mut out = vec![0.0; n];
    for &k in valid {
        for (o, &q) in out.iter_mut().zip(&profiles[k]) {
            *o += alpha[k] * q;
        }
    }
    out
}

/// Scales whose maximum raw prediction exceeds `threshold`.
pub fn validity_set(maxima: &[f64], threshold: f64) -> Vec<usize> {
    maxima
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > threshold)
        .map(|(k, _)| k)
        .collect()
}

/// Minimum range within `±π/n_hd` of each basis heading.
pub fn heading_clearance(scan: &LidarScan, n_hd: usize) -> Vec<f64> {
    let half = PI / n_hd as f64;
    basis_headings(n_hd)
        .into_iter()
        .map(|th| scan.min_range_in_cone(th, half))
        .collect()
}

/// Zero every scale's value for headings closer than `d_safe` to a wall.
/// Returns the per-heading mask.
pub fn obstacle_mask(profiles: &mut [Vec<f64>], clearance: &[f64], d_safe: f64) -> Vec<bool> {
    let mask: Vec<bool> = clearance.iter().map(|&d| d < d_safe).collect();
    for profile in profiles.iter_mut() {
        for (q, &m) in profile.iter_mut().zip(&mask) {
            if m {
                *q = 0.0;
            }
        }
    }
    mask
}

/// Circular mean of a profile over the basis headings, in `[0, 2π)`.
pub fn action_angle(q: &[f64]) -> Option<f64> {
    let (mut s, mut c) = (0.0, 0.0);
    for (&w, th) in q.iter().zip(basis_headings(q.len())) {
        s += w * th.sin();
        c += w * th.cos();
    }
    if s.abs() < DEGENERATE_RESULTANT && c.abs() < DEGENERATE_RESULTANT {
        None
    } else {
        Some(wrap_positive(s.atan2(c)))
    }
}
