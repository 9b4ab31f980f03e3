//! Boundary vector cells: Gaussian distance × direction tuning over a scan.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::world::{wrap_signed, LidarScan};

/// Normalised Gaussian density.
#[inline]
pub fn gaussian(x: f64, sigma: f64) -> f64 {
    (-(x * x) / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma)
}

/// One population of boundary vector cells sharing tuning widths.
///
/// Cells are stored direction-major: cell `i * n_dists + k` prefers direction
/// `i` and distance `k` of the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BvcLayer {
    pub preferred_dists: Vec<f64>,
    pub preferred_dirs: Vec<f64>,
    pub sigma_r: f64,
    pub sigma_theta: f64,
    pub norm: f64,
    n_dirs: usize,
    n_dists: usize,
}

impl BvcLayer {
    /// Uniform polar grid: `n_dirs` directions from 0 and `n_dists` distances
    /// `max_dist·(k+1)/n_dists`.
    pub fn grid(
        n_dirs: usize,
        n_dists: usize,
        max_dist: f64,
        sigma_r: f64,
        sigma_theta: f64,
        norm: f64,
    ) -> Self {
        assert!(n_dirs >= 1 && n_dists >= 1, "BVC grid needs at least one cell");
        assert!(sigma_r > 0.0 && sigma_theta > 0.0, "tuning widths must be positive");
        assert!(norm > 0.0, "normalisation must be positive");
        let mut preferred_dists = Vec::with_capacity(n_dirs * n_dists);
        let mut preferred_dirs = Vec::with_capacity(n_dirs * n_dists);
        for i in 0..n_dirs {
            let phi = TAU * i as f64 / n_dirs as f64;
            for k in 0..n_dists {
                preferred_dirs.push(phi);
                preferred_dists.push(max_dist * (k + 1) as f64 / n_dists as f64);
            }
        }
        Self {
            preferred_dists,
            preferred_dirs,
            sigma_r,
            sigma_theta,
            norm,
            n_dirs,
            n_dists,
        }
    }

    pub fn len(&self) -> usize {
        self.preferred_dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preferred_dists.is_empty()
    }

    pub fn n_dirs(&self) -> usize {
        self.n_dirs
    }

    pub fn n_dists(&self) -> usize {
        self.n_dists
    }

    /// Firing rates for a scan.
    ///
    /// The tuning is separable, so the angular factor is evaluated once per
    /// (direction, beam) and the radial factor once per (distance, beam).
    pub fn rates(&self, scan: &LidarScan) -> Vec<f64> {
        let n_beams = scan.len();
        let dirs: Vec<f64> = (0..self.n_dirs)
            .map(|i| self.preferred_dirs[i * self.n_dists])
            .collect();
        let dists = &self.preferred_dists[..self.n_dists];

        let angular: Vec<f64> = dirs
            .iter()
            .flat_map(|&phi| {
                scan.bearings
                    .iter()
                    .map(move |&th| gaussian(wrap_signed(th - phi), self.sigma_theta))
            })
            .collect();
        let radial: Vec<f64> = dists
            .iter()
            .flat_map(|&d| scan.ranges.iter().map(move |&r| gaussian(r - d, self.sigma_r)))
            .collect();

        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_dirs {
            let a = &angular[i * n_beams..(i + 1) * n_beams];
            for k in 0..self.n_dists {
                let r = &radial[k * n_beams..(k + 1) * n_beams];
                let s: f64 = a.iter().zip(r).map(|(x, y)| x * y).sum();
                out.push(s / self.norm);
            }
        }
        out
    }
}
