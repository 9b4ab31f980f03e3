use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{wrap_signed, AgentState, EnvironmentSpec, Vec2};

/// Beams per full sweep on the reference robot.
pub const DEFAULT_BEAMS: usize = 720;

const MIN_RANGE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum WorldError {
    #[error("agent position ({x}, {y}) lies outside the arena")]
    InvalidState { x: f64, y: f64 },
}

/// One planar rangefinder sweep with allocentric bearings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LidarScan {
    pub ranges: Vec<f64>,
    pub bearings: Vec<f64>,
    pub max_range: f64,
}

impl LidarScan {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    /// Minimum range over beams whose bearing lies within `±half_width` of
    /// `center`. Returns `max_range` when no beam falls inside the cone.
    pub fn min_range_in_cone(&self, center: f64, half_width: f64) -> f64 {
        self.ranges
            .iter()
            .zip(&self.bearings)
            .filter(|(_, &b)| wrap_signed(b - center).abs() <= half_width + 1e-12)
            .map(|(&r, _)| r)
            .fold(self.max_range, f64::min)
    }
}

/// Cast `n_res` beams at bearings `2πj/n_res` from the agent position.
///
/// Ranges are distances to the nearest wall or obstacle, clamped to
/// `max_range`. The agent heading plays no role.
pub fn raycast(
    env: &EnvironmentSpec,
    state: &AgentState,
    n_res: usize,
    max_range: f64,
) -> Result<LidarScan, WorldError> {
    let p = state.position;
    if !env.contains(p) || !p.x.is_finite() || !p.y.is_finite() {
        return Err(WorldError::InvalidState { x: p.x, y: p.y });
    }
    let walls: Vec<_> = env.walls().collect();
    let mut ranges = Vec::with_capacity(n_res);
    let mut bearings = Vec::with_capacity(n_res);
    for j in 0..n_res {
        let theta = TAU * j as f64 / n_res as f64;
        let dir = Vec2::new(theta.cos(), theta.sin());
        let hit = walls
            .iter()
            .filter_map(|w| w.ray_hit(p, dir))
            .fold(f64::INFINITY, f64::min);
        ranges.push(hit.min(max_range).max(MIN_RANGE));
        bearings.push(theta);
    }
    Ok(LidarScan {
        ranges,
        bearings,
        max_range,
    })
}
