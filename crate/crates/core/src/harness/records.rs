//! Results table persistence.
//!
//! Header row, in order:
//!
//! ```text
//! strategy,environment,trial,episode,step_count,reached_goal,wall_time,seed,config_hash,snapshot_hash
//! ```
//!
//! `wall_time` is simulated seconds (`step_count × seconds_per_step`).
//! `snapshot_hash` identifies the frozen weights an evaluation trial ran
//! against and is empty for runs whose weights stay plastic.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub strategy: String,
    pub environment: String,
    pub trial: usize,
    pub episode: usize,
    pub step_count: u64,
    pub reached_goal: bool,
    pub wall_time: f64,
    pub seed: u64,
    pub config_hash: String,
    pub snapshot_hash: String,
}

pub const RECORD_HEADER: [&str; 10] = [
    "strategy",
    "environment",
    "trial",
    "episode",
    "step_count",
    "reached_goal",
    "wall_time",
    "seed",
    "config_hash",
    "snapshot_hash",
];

pub fn write_records<W: Write>(w: W, records: &[TrialRecord]) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(RECORD_HEADER)?;
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_records(path: impl AsRef<Path>, records: &[TrialRecord]) -> csv::Result<()> {
    write_records(std::fs::File::create(path)?, records)
}

pub fn read_records<R: Read>(r: R) -> csv::Result<Vec<TrialRecord>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

pub fn load_records(path: impl AsRef<Path>) -> csv::Result<Vec<TrialRecord>> {
    read_records(std::fs::File::open(path)?)
}

/// Group step counts by strategy, keeping first-appearance order.
pub fn step_counts_by_strategy(records: &[TrialRecord]) -> Vec<(String, Vec<f64>)> {
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|(name, _)| *name == r.strategy) {
            Some((_, v)) => v.push(r.step_count as f64),
            None => groups.push((r.strategy.clone(), vec![r.step_count as f64])),
        }
    }
    groups
}
