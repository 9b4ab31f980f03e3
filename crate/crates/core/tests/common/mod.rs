#![allow(dead_code)]

pub mod anova;
pub mod properties;

use std::path::PathBuf;

use placenav::config::Config;
use placenav::world::{load_environment, EnvironmentSpec};

pub fn workspace_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

pub fn desk_config() -> Config {
    Config::load(workspace_path("configs/desk.toml")).expect("desk preset parses")
}

pub fn arena(name: &str) -> EnvironmentSpec {
    load_environment(workspace_path(&format!("envs/{name}.env"))).expect("bundled arena parses")
}

/// Relative error against a non-zero reference, absolute error near zero.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
