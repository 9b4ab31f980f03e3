use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::world::{wrap_positive, wrap_signed, LidarScan, Vec2};

/// Random-walk and loop-prevention settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreConfig {
    /// Half-width of the uniform heading perturbation per step, radians.
    pub sigma_turn: f64,
    /// Steps spent exploring after a failed decision or a detected loop.
    pub duration: u32,
    /// Loop detection window, steps.
    pub n_loop: usize,
    /// Net displacement below which a full turn counts as a loop, metres.
    pub delta_loop: f64,
    /// Resamples tried before falling back to the clearest heading.
    pub max_resamples: u32,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        Self {
            sigma_turn: 30f64.to_radians(),
            duration: 50,
            n_loop: 100,
            delta_loop: 0.5,
            max_resamples: 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exploring,
    Exploiting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopStatus {
    Ok,
    Triggered,
}

#[derive(Clone, Debug)]
pub struct ModeState {
    pub mode: Mode,
    pub explore_steps_remaining: u32,
    pub turn_accumulator: f64,
    window: VecDeque<(Vec2, f64)>,
    last_heading: Option<f64>,
}

impl ModeState {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            explore_steps_remaining: 0,
            turn_accumulator: 0.0,
            window: VecDeque::new(),
            last_heading: None,
        }
    }

    /// Switch to exploration for `steps` ticks.
    pub fn start_exploring(&mut self, steps: u32) {
        self.mode = Mode::Exploring;
        self.explore_steps_remaining = steps;
        self.reset_window();
    }

    /// Count down one exploration tick; returns to exploitation when the
    /// budget runs out and `can_exploit` holds.
    pub fn tick(&mut self, can_exploit: bool) {
        if self.mode == Mode::Exploring {
            self.explore_steps_remaining = self.explore_steps_remaining.saturating_sub(1);
            if self.explore_steps_remaining == 0 && can_exploit {
                self.mode = Mode::Exploiting;
            }
        }
    }

    fn reset_window(&mut self) {
        self.window.clear();
        self.turn_accumulator = 0.0;
        self.last_heading = None;
    }

    /// Track turning and displacement over the last `n_loop` poses. A full
    /// turn with less than `delta_loop` net displacement switches to
    /// exploration and clears the window.
    pub fn loop_guard(&mut self, position: Vec2, heading: f64, cfg: &ExploreConfig) -> LoopStatus {
        let turn = self
            .last_heading
            .map_or(0.0, |h| wrap_signed(heading - h).abs());
        self.last_heading = Some(heading);
        self.window.push_back((position, turn));
        self.turn_accumulator += turn;
        while self.window.len() > cfg.n_loop {
            if let Some((_, t)) = self.window.pop_front() {
                self.turn_accumulator -= t;
            }
        }
        if self.window.len() < cfg.n_loop {
            return LoopStatus::Ok;
        }
        // the oldest entry's turn happened before the window started
        let turned = self.turn_accumulator - self.window[0].1;
        let displacement = (position - self.window[0].0).norm();
        if turned > TAU && displacement < cfg.delta_loop {
            self.start_exploring(cfg.duration);
            LoopStatus::Triggered
        } else {
            LoopStatus::Ok
        }
    }
}

/// Perturb the previous heading by uniform noise in `±sigma_turn`. Headings
/// whose cone is closer than `d_safe` to a wall are resampled; if every
/// resample is blocked the clearest of `4·n_hd` evenly spaced headings wins.
pub fn explore_step<R: Rng + ?Sized>(
    prev_heading: f64,
    rng: &mut R,
    scan: &LidarScan,
    n_hd: usize,
    d_safe: f64,
    cfg: &ExploreConfig,
) -> f64 {
    let half = PI / n_hd as f64;
    let clear = |th: f64| scan.min_range_in_cone(th, half) >= d_safe;
    for _ in 0..=cfg.max_resamples {
        let u: f64 = rng.random();
        let th = wrap_positive(prev_heading + cfg.sigma_turn * (2.0 * u - 1.0));
        if clear(th) {
            return th;
        }
    }
    let n = 4 * n_hd;
    (0..n)
        .map(|d| TAU * d as f64 / n as f64)
        .map(|th| (th, scan.min_range_in_cone(th, half)))
        .fold((prev_heading, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
        .0
}
