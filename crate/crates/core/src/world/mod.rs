//! Arena geometry, LiDAR raycasting and agent kinematics.
//!
//! Everything here is a pure function of its inputs. Positions are in metres,
//! angles in radians measured counter-clockwise from the world x-axis.

mod env;
mod kinematics;
mod lidar;

pub use env::{load_environment, parse_environment, EnvError, EnvironmentSpec, Pose, Segment};
pub use kinematics::{in_goal, step_agent, AgentState, DEFAULT_COLLISION_MARGIN};
pub use lidar::{raycast, LidarScan, WorldError, DEFAULT_BEAMS};

pub type Vec2 = nalgebra::Vector2<f64>;

/// Wrap an angle into `[0, 2π)`.
pub fn wrap_positive(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = theta.rem_euclid(tau);
    // rem_euclid can return exactly tau for tiny negative inputs
    if w >= tau {
        0.0
    } else {
        w
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_signed(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = theta.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}
