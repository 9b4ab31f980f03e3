use serde::{Deserialize, Serialize};

/// Exponentially decaying traces of place-cell and head-direction activity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceState {
    pub pc: Vec<f64>,
    pub hd: Vec<f64>,
}

impl TraceState {
    pub fn new(n_p: usize, n_hd: usize) -> Self {
        Self {
            pc: vec![0.0; n_p],
            hd: vec![0.0; n_hd],
        }
    }

    pub fn reset(&mut self) {
        self.pc.iter_mut().chain(self.hd.iter_mut()).for_each(|x| *x = 0.0);
    }

    /// `Υ ← Υ + (dt/τ_m)(−Υ + v)` for both populations.
    pub fn step(&mut self, pc_rates: &[f64], hd_rates: &[f64], dt: f64, tau_m: f64) {
        let k = dt / tau_m;
        for (u, &v) in self.pc.iter_mut().zip(pc_rates) {
            *u += k * (v - *u);
        }
        for (u, &v) in self.hd.iter_mut().zip(hd_rates) {
            *u += k * (v - *u);
        }
    }
}
