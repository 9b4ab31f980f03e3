use serde::{Deserialize, Serialize};

use super::TraceState;

/// Updates smaller than this do not create new entries.
pub const DEFAULT_MATERIALIZE_FLOOR: f64 = 1e-6;

/// Heading-gated place-cell → place-cell weights `W[k][i][j]` (post `i`,
/// pre `j`), stored as one sorted sparse row per `(k, i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyTensor {
    n_hd: usize,
    n_p: usize,
    pub floor: f64,
    rows: Vec<Vec<(u32, f64)>>,
}

impl AdjacencyTensor {
    pub fn new(n_hd: usize, n_p: usize) -> Self {
        Self {
            n_hd,
            n_p,
            floor: DEFAULT_MATERIALIZE_FLOOR,
            rows: vec![Vec::new(); n_hd * n_p],
        }
    }

    pub fn n_headings(&self) -> usize {
        self.n_hd
    }

    pub fn n_cells(&self) -> usize {
        self.n_p
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    fn row(&self, k: usize, i: usize) -> &[(u32, f64)] {
        &self.rows[k * self.n_p + i]
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        let row = self.row(k, i);
        match row.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        }
    }

    /// Overwrite one entry; a zero value removes it.
    pub fn set(&mut self, k: usize, i: usize, j: usize, w: f64) {
        let row = &mut self.rows[k * self.n_p + i];
        match row.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(pos) if w == 0.0 => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = w,
            Err(_) if w == 0.0 => {}
            Err(pos) => row.insert(pos, (j as u32, w)),
        }
    }

    /// All stored entries as `(k, i, j, w)` in `(k, i, j)` order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            let (k, i) = (r / self.n_p, r % self.n_p);
            row.iter().map(move |&(j, w)| (k, i, j as usize, w))
        })
    }

    /// `Σ_k |W[k][i][j]|`.
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        (0..self.n_hd).map(|k| self.get(k, i, j).abs()).sum()
    }

    /// `W[k][i][j] += delta` and `W[k][j][i] -= delta`.
    ///
    /// New entries are only created when `|delta|` exceeds the floor; existing
    /// entries always receive the update. Both directions of a pair are
    /// created together, so one exists iff the other does.
    fn add_pair(&mut self, k: usize, i: usize, j: usize, delta: f64) {
        let n_p = self.n_p;
        let fwd = &mut self.rows[k * n_p + i];
        match fwd.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(pos) => {
                fwd[pos].1 += delta;
                let back = &mut self.rows[k * n_p + j];
                match back.binary_search_by_key(&(i as u32), |e| e.0) {
                    Ok(p) => back[p].1 -= delta,
                    Err(p) => back.insert(p, (i as u32, -delta)),
                }
            }
            Err(pos) => {
                if delta.abs() <= self.floor {
                    return;
                }
                fwd.insert(pos, (j as u32, delta));
                let back = &mut self.rows[k * n_p + j];
                match back.binary_search_by_key(&(i as u32), |e| e.0) {
                    Ok(p) => back[p].1 -= delta,
                    Err(p) => back.insert(p, (i as u32, -delta)),
                }
            }
        }
    }

    /// Temporally smoothed STDP step:
    /// `ΔW[k][i][j] = (dt/τ) Υᵏ_h (vᵢ Υⱼ − vⱼ Υᵢ)` for `i ≠ j`.
    ///
    /// Only pairs with at least one active cell can change, so the sweep is
    /// over active cells against the whole layer.
    pub fn update(&mut self, rates: &[f64], traces: &TraceState, dt: f64, tau_w_pp: f64) {
        debug_assert_eq!(rates.len(), self.n_p);
        let k = dt / tau_w_pp;
        let gates: Vec<(usize, f64)> = traces
            .hd
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, g)| g != 0.0)
            .collect();
        if gates.is_empty() {
            return;
        }
        let active: Vec<usize> = (0..self.n_p).filter(|&i| rates[i] != 0.0).collect();
        for &i in &active {
            for j in 0..self.n_p {
                if j == i || (rates[j] != 0.0 && j < i) {
                    continue;
                }
                let base = rates[i] * traces.pc[j] - rates[j] * traces.pc[i];
                if base == 0.0 {
                    continue;
                }
                for &(h, g) in &gates {
                    self.add_pair(h, i, j, k * g * base);
                }
            }
        }
    }

    /// `Σ_{j≠i} W[a][i][j] vⱼ` for every post cell `i`.
    pub fn drive(&self, a: usize, rates: &[f64]) -> Vec<f64> {
        (0..self.n_p)
            .map(|i| {
                self.row(a, i)
                    .iter()
                    .filter(|&&(j, _)| j as usize != i)
                    .map(|&(j, w)| w * rates[j as usize])
                    .sum()
            })
            .collect()
    }

    pub(crate) fn from_triplets(
        n_hd: usize,
        n_p: usize,
        floor: f64,
        entries: impl IntoIterator<Item = (usize, usize, usize, f64)>,
    ) -> Self {
        let mut t = Self::new(n_hd, n_p);
        t.floor = floor;
        for (k, i, j, w) in entries {
            t.rows[k * n_p + i].push((j as u32, w));
        }
        for row in &mut t.rows {
            row.sort_by_key(|e| e.0);
        }
        t
    }
}
