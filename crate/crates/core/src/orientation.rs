//! Head-direction population and the basis-heading set.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::world::{wrap_signed, Vec2};

pub const DEFAULT_HD_CELLS: usize = 8;

/// `n` evenly spaced headings starting at 0.
pub fn basis_headings(n: usize) -> Vec<f64> {
    (0..n).map(|d| TAU * d as f64 / n as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeadDirectionLayer {
    pub preferred_dirs: Vec<f64>,
    /// Heading of the anchor cue; 0 means the world x-axis.
    pub anchor: f64,
}

impl Default for HeadDirectionLayer {
    fn default() -> Self {
        Self::new(DEFAULT_HD_CELLS, 0.0)
    }
}

impl HeadDirectionLayer {
    pub fn new(n_hd: usize, anchor: f64) -> Self {
        Self {
            preferred_dirs: basis_headings(n_hd),
            anchor,
        }
    }

    pub fn len(&self) -> usize {
        self.preferred_dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preferred_dirs.is_empty()
    }

    /// Rectified projection of the velocity onto each preferred direction.
    pub fn rates(&self, velocity: Vec2) -> Vec<f64> {
        self.preferred_dirs
            .iter()
            .map(|&th| {
                let a = th + self.anchor;
                (velocity.x * a.cos() + velocity.y * a.sin()).max(0.0)
            })
            .collect()
    }
}

/// Index of the basis heading (out of `n_hd`) closest to `theta` on the
/// circle. Exact ties resolve to the lower index.
pub fn nearest_basis_heading(theta: f64, n_hd: usize) -> usize {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (d, th) in basis_headings(n_hd).into_iter().enumerate() {
        let dist = wrap_signed(theta - th).abs();
        // treat differences at rounding level as ties
        if dist < best_dist - 1e-12 {
            best = d;
            best_dist = dist;
        }
    }
    best
}
