//! Place-field and reward-map measurements over a position grid.

use rayon::prelude::*;

use super::heatmap::FieldGrid;
use crate::config::ModelConfig;
use crate::scale::ScaleStack;
use crate::world::{raycast, AgentState, EnvironmentSpec, LidarScan, Vec2};

/// Place-layer iterations run on a fixed scan when probing a position.
pub const SETTLE_ITERS: usize = 30;

/// Rate above which a cell counts as active when measuring fields.
pub const FIELD_THRESHOLD: f64 = 0.2;

/// Place-cell rates of one scale at every centre of a `res × res` grid,
/// stored position-major (`rates[cell][pc]`).
#[derive(Clone, Debug)]
pub struct FieldSample {
    pub res: usize,
    pub width: f64,
    pub height: f64,
    pub n_pc: usize,
    pub rates: Vec<Vec<f64>>,
}

/// Summary of the fields in a [`FieldSample`].
#[derive(Clone, Debug, PartialEq)]
pub struct FieldStats {
    /// Fraction of grid cells where some PC exceeds the threshold.
    pub coverage: f64,
    /// Fraction of peaked PCs whose peak grid cell no other peaked PC shares.
    pub uniqueness: f64,
    /// PCs whose peak exceeds the threshold.
    pub n_peaked: usize,
    /// Mean area (m²) where a peaked PC fires at ≥ half its peak.
    pub mean_area: f64,
}

fn grid_centre(res: usize, width: f64, height: f64, idx: usize) -> Vec2 {
    Vec2::new(
        ((idx % res) as f64 + 0.5) * width / res as f64,
        ((idx / res) as f64 + 0.5) * height / res as f64,
    )
}

/// LiDAR scans at every grid centre, in row-major order from the lowest `y`.
pub fn grid_scans(env: &EnvironmentSpec, model: &ModelConfig, res: usize) -> Vec<LidarScan> {
    let max_range = model.world.max_range.unwrap_or_else(|| env.diagonal());
    (0..res * res)
        .into_par_iter()
        .map(|idx| {
            let p = grid_centre(res, env.width, env.height, idx);
            raycast(env, &AgentState::at(p, 0.0), model.world.n_res, max_range)
                .expect("grid centres lie inside the arena")
        })
        .collect()
}

pub fn sample_fields(stack: &ScaleStack, env: &EnvironmentSpec, scans: &[LidarScan], res: usize) -> FieldSample {
    assert_eq!(scans.len(), res * res);
    FieldSample {
        res,
        width: env.width,
        height: env.height,
        n_pc: stack.place.n_cells(),
        rates: scans
            .par_iter()
            .map(|s| stack.settled_rates(s, SETTLE_ITERS))
            .collect(),
    }
}

impl FieldSample {
    pub fn centre(&self, idx: usize) -> Vec2 {
        grid_centre(self.res, self.width, self.height, idx)
    }

    /// Rate map of one PC.
    pub fn field_of(&self, pc: usize) -> FieldGrid {
        FieldGrid {
            res: self.res,
            width: self.width,
            height: self.height,
            values: self.rates.iter().map(|r| r[pc]).collect(),
        }
    }

    /// Peak rate and its grid cell for every PC (first cell on ties).
    pub fn peaks(&self) -> Vec<(f64, usize)> {
        let mut peaks = vec![(f64::NEG_INFINITY, 0); self.n_pc];
        for (cell, r) in self.rates.iter().enumerate() {
            for (pk, &v) in peaks.iter_mut().zip(r) {
                if v > pk.0 {
                    *pk = (v, cell);
                }
            }
        }
        peaks
    }

    pub fn stats(&self) -> FieldStats {
        let cells = self.rates.len();
        let covered = self
            .rates
            .iter()
            .filter(|r| r.iter().any(|&v| v > FIELD_THRESHOLD))
            .count();
        let peaks = self.peaks();
        let peaked: Vec<(usize, f64, usize)> = peaks
            .iter()
            .enumerate()
            .filter(|(_, p)| p.0 > FIELD_THRESHOLD)
            .map(|(i, p)| (i, p.0, p.1))
            .collect();
        let mut owners = vec![0usize; cells];
        for &(_, _, cell) in &peaked {
            owners[cell] += 1;
        }
        let unique = peaked.iter().filter(|p| owners[p.2] == 1).count();
        let cell_area = self.width * self.height / cells as f64;
        let total_area: f64 = peaked
            .iter()
            .map(|&(i, peak, _)| {
                let n = self.rates.iter().filter(|r| r[i] >= 0.5 * peak).count();
                n as f64 * cell_area
            })
            .sum();
        let n_peaked = peaked.len();
        FieldStats {
            coverage: covered as f64 / cells as f64,
            uniqueness: if n_peaked > 0 {
                unique as f64 / n_peaked as f64
            } else {
                0.0
            },
            n_peaked,
            mean_area: if n_peaked > 0 {
                total_area / n_peaked as f64
            } else {
                0.0
            },
        }
    }

    /// Reward-cell activation at every grid cell.
    pub fn reward_map(&self, stack: &ScaleStack) -> FieldGrid {
        FieldGrid {
            res: self.res,
            width: self.width,
            height: self.height,
            values: self.rates.iter().map(|r| stack.reward.activation(r)).collect(),
        }
    }
}

/// Grid cells whose value exceeds `fraction` of the map maximum.
pub fn support(map: &FieldGrid, fraction: f64) -> usize {
    let max = map.max();
    if !(max > 0.0) {
        return 0;
    }
    map.values.iter().filter(|&&v| v > fraction * max).count()
}

/// Whether the straight line between `p` and `q` crosses an obstacle.
pub fn line_blocked(env: &EnvironmentSpec, p: Vec2, q: Vec2) -> bool {
    let d = q - p;
    let len = d.norm();
    if len == 0.0 {
        return false;
    }
    let dir = d / len;
    env.obstacles
        .iter()
        .any(|w| w.ray_hit(p, dir).is_some_and(|t| t < len))
}

/// Adjacency mass between neighbouring PC pairs (peaks within
/// `neighbour_radius`), split by whether an obstacle blocks the straight line
/// between the peaks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarrierMass {
    pub across: f64,
    pub same_side: f64,
}

pub fn barrier_mass(
    stack: &ScaleStack,
    sample: &FieldSample,
    env: &EnvironmentSpec,
    neighbour_radius: f64,
) -> BarrierMass {
    let peaked: Vec<(usize, Vec2)> = sample
        .peaks()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.0 > FIELD_THRESHOLD)
        .map(|(i, p)| (i, sample.centre(p.1)))
        .collect();
    let mut mass = BarrierMass {
        across: 0.0,
        same_side: 0.0,
    };
    for (a, &(i, pi)) in peaked.iter().enumerate() {
        for &(j, pj) in &peaked[a + 1..] {
            if (pi - pj).norm() > neighbour_radius {
                continue;
            }
            let m = stack.adjacency.mass(i, j);
            if line_blocked(env, pi, pj) {
                mass.across += m;
            } else {
                mass.same_side += m;
            }
        }
    }
    mass
}
