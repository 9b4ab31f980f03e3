use serde::{Deserialize, Serialize};

use super::{wrap_positive, EnvironmentSpec, Segment, Vec2};

/// Minimum allowed distance between the agent and any wall, in metres.
pub const DEFAULT_COLLISION_MARGIN: f64 = 0.1;

// Slack used when deciding whether the agent already sits on a margin boundary.
const ON_BOUNDARY: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Vec2,
    /// Radians in `[0, 2π)`.
    pub heading: f64,
    /// Position delta of the most recent step (metres per step).
    pub velocity: Vec2,
}

impl AgentState {
    pub fn at(position: Vec2, heading: f64) -> Self {
        Self {
            position,
            heading: wrap_positive(heading),
            velocity: Vec2::zeros(),
        }
    }
}

/// Advance the agent `step_len` metres along `heading`.
///
/// Moves that would bring the agent within `margin` of a wall are cut short
/// at the margin, keeping the commanded heading. The returned velocity is the
/// realised displacement.
pub fn step_agent(
    env: &EnvironmentSpec,
    state: &AgentState,
    heading: f64,
    step_len: f64,
    margin: f64,
) -> AgentState {
    debug_assert!(step_len > 0.0);
    let heading = wrap_positive(heading);
    let dir = Vec2::new(heading.cos(), heading.sin());
    let p = state.position;
    let free = env
        .walls()
        .map(|w| free_travel(&w, p, dir, margin))
        .fold(f64::INFINITY, f64::min);
    let travel = step_len.min(free).max(0.0);
    let position = p + dir * travel;
    AgentState {
        position,
        heading,
        velocity: position - p,
    }
}

/// Distance the agent can travel from `p` along unit `dir` before entering the
/// `margin`-capsule around `seg`.
fn free_travel(seg: &Segment, p: Vec2, dir: Vec2, margin: f64) -> f64 {
    let q = seg.closest_point(p);
    let away = p - q;
    let d0 = away.norm();
    if d0 <= margin + ON_BOUNDARY {
        // on or inside the capsule: only motion that does not approach is free
        return if d0 > 0.0 && away.dot(&dir) >= 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    if margin <= 0.0 {
        return seg.ray_hit(p, dir).unwrap_or(f64::INFINITY);
    }

    let mut entry = f64::INFINITY;
    for c in [seg.a, seg.b] {
        if let Some(s) = ray_circle_entry(p, dir, c, margin) {
            entry = entry.min(s);
        }
    }
    let e = seg.b - seg.a;
    let len = e.norm();
    if len > 0.0 {
        let unit = e / len;
        let normal = Vec2::new(-unit.y, unit.x);
        let un = dir.dot(&normal);
        if un.abs() > 1e-15 {
            let h0 = (p - seg.a).dot(&normal);
            for side in [margin, -margin] {
                let s = (side - h0) / un;
                if s >= 0.0 {
                    let t = (p + dir * s - seg.a).dot(&unit);
                    if (0.0..=len).contains(&t) {
                        entry = entry.min(s);
                    }
                }
            }
        }
    }
    // step back a hair so the realised position stays outside the margin
    (entry - 1e-12).max(0.0)
}

fn ray_circle_entry(p: Vec2, dir: Vec2, c: Vec2, r: f64) -> Option<f64> {
    let pc = c - p;
    let b = pc.dot(&dir);
    let disc = b * b - (pc.norm_squared() - r * r);
    if disc < 0.0 {
        return None;
    }
    let s = b - disc.sqrt();
    (s >= 0.0).then_some(s)
}

/// Strictly inside the goal disc.
pub fn in_goal(state: &AgentState, env: &EnvironmentSpec) -> bool {
    (state.position - env.goal_center).norm() < env.goal_radius
}
