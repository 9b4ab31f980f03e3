use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Membrane and inhibition constants of a place-cell layer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceParams {
    /// Membrane time constant, in steps.
    pub tau_p: f64,
    /// Feedforward inhibition gain on total BVC activity.
    pub gamma_pb: f64,
    /// Recurrent inhibition gain on total place-cell activity.
    pub gamma_pp: f64,
    /// Output gain.
    pub psi: f64,
}

impl Default for PlaceParams {
    fn default() -> Self {
        Self {
            tau_p: 1.0,
            gamma_pb: 0.3,
            gamma_pp: 0.3,
            psi: 3.0,
        }
    }
}

/// Learning constants shared by the place-cell plasticity rules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlasticityConfig {
    /// BVC→PC learning time constant, in steps.
    pub tau_w_pb: f64,
    /// Oja normalisation factor.
    pub alpha_pb: f64,
    /// Probability that a BVC→PC synapse starts at 1.
    pub p_pb: f64,
    /// Trace integration constant, in steps.
    pub tau_m: f64,
    /// Adjacency learning time constant, in steps.
    pub tau_w_pp: f64,
    pub dt: f64,
}

impl Default for PlasticityConfig {
    fn default() -> Self {
        Self {
            tau_w_pb: 20.0,
            alpha_pb: 1.0,
            p_pb: 0.25,
            tau_m: 4.0,
            tau_w_pp: 1.0,
            dt: 1.0,
        }
    }
}

impl PlasticityConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("tau_w_pb", self.tau_w_pb),
            ("alpha_pb", self.alpha_pb),
            ("tau_m", self.tau_m),
            ("tau_w_pp", self.tau_w_pp),
            ("dt", self.dt),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.p_pb > 0.0 && self.p_pb <= 1.0) {
            return Err(format!("p_pb must lie in (0, 1], got {}", self.p_pb));
        }
        Ok(())
    }
}

/// Place-cell population driven by one BVC layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceLayer {
    n_p: usize,
    n_b: usize,
    pub params: PlaceParams,
    pub membrane: Vec<f64>,
    pub rates: Vec<f64>,
    /// Row-major `n_p × n_b` BVC→PC weights.
    pub w_pb: Vec<f64>,
}

impl PlaceLayer {
    /// Sparse binary initial weights: each synapse is 1 with probability
    /// `p_pb`, drawn from a generator seeded with `seed`.
    pub fn new(n_p: usize, n_b: usize, params: PlaceParams, p_pb: f64, seed: u64) -> Self {
        assert!(n_p >= 1 && n_b >= 1, "layer needs at least one cell and one input");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w_pb = (0..n_p * n_b)
            .map(|_| if rng.random::<f64>() < p_pb { 1.0 } else { 0.0 })
            .collect();
        Self {
            n_p,
            n_b,
            params,
            membrane: vec![0.0; n_p],
            rates: vec![0.0; n_p],
            w_pb,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_p
    }

    pub fn n_inputs(&self) -> usize {
        self.n_b
    }

    pub fn weights_of(&self, i: usize) -> &[f64] {
        &self.w_pb[i * self.n_b..(i + 1) * self.n_b]
    }

    /// Zero membrane potentials and rates, keeping weights.
    pub fn reset_activity(&mut self) {
        self.membrane.iter_mut().for_each(|s| *s = 0.0);
        self.rates.iter_mut().for_each(|v| *v = 0.0);
    }

    /// One forward-Euler step of the membrane equation followed by the
    /// rectified-tanh rate. Recurrent inhibition reads the rates from before
    /// this step, so the update does not depend on cell order.
    pub fn step(&mut self, bvc: &[f64], dt: f64) {
        debug_assert_eq!(bvc.len(), self.n_b);
        let PlaceParams {
            tau_p,
            gamma_pb,
            gamma_pp,
            psi,
        } = self.params;
        let inhibition = gamma_pb * bvc.iter().sum::<f64>() + gamma_pp * self.rates.iter().sum::<f64>();
        let k = dt / tau_p;
        for (i, s) in self.membrane.iter_mut().enumerate() {
            let row = &self.w_pb[i * self.n_b..(i + 1) * self.n_b];
            let excitation: f64 = row.iter().zip(bvc).map(|(w, v)| w * v).sum();
            *s += k * (-*s + excitation - inhibition);
        }
        for (v, &s) in self.rates.iter_mut().zip(&self.membrane) {
            *v = (psi * s).max(0.0).tanh();
        }
    }

    /// Oja-style update of the BVC→PC weights, clamped at zero.
    pub fn oja_update(&mut self, bvc: &[f64], dt: f64, cfg: &PlasticityConfig) {
        debug_assert_eq!(bvc.len(), self.n_b);
        let k = dt / cfg.tau_w_pb;
        let inv_alpha = 1.0 / cfg.alpha_pb;
        for (i, &vp) in self.rates.iter().enumerate() {
            if vp == 0.0 {
                continue;
            }
            let row = &mut self.w_pb[i * self.n_b..(i + 1) * self.n_b];
            for (w, &vb) in row.iter_mut().zip(bvc) {
                *w = (*w + k * vp * (vb - inv_alpha * vp * *w)).max(0.0);
            }
        }
    }

    pub fn snapshot(&self, step: u64) -> ActivitySnapshot {
        ActivitySnapshot::from_dense(step, &self.rates)
    }
}

/// Immutable record of place-cell rates at one simulation step, stored
/// sparsely since most cells are silent.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivitySnapshot {
    pub step: u64,
    len: usize,
    active: Arc<[(u32, f64)]>,
}

impl ActivitySnapshot {
    pub fn from_dense(step: u64, rates: &[f64]) -> Self {
        let active: Vec<(u32, f64)> = rates
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i as u32, v))
            .collect();
        Self {
            step,
            len: rates.len(),
            active: active.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Nonzero `(cell, rate)` pairs in cell order.
    pub fn active(&self) -> &[(u32, f64)] {
        &self.active
    }

    pub fn is_silent(&self) -> bool {
        self.active.is_empty()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len];
        for &(i, v) in self.active.iter() {
            out[i as usize] = v;
        }
        out
    }

    pub fn max_rate(&self) -> f64 {
        self.active.iter().map(|&(_, v)| v.abs()).fold(0.0, f64::max)
    }
}
