//! Versioned binary weight snapshots.
//!
//! Layout (little endian):
//!
//! ```text
//! magic    b"PNAVSNAP"
//! version  u32 (= 1)
//! config   u64 length + UTF-8 TOML of the model config
//! env      u64 length + UTF-8 environment file text
//! n_scales u32
//! per scale:
//!   name       u64 length + UTF-8
//!   n_p, n_b   u32, u32
//!   w_pb       n_p·n_b × f64 (row-major)
//!   n_hd       u32
//!   floor      f64
//!   nnz        u64
//!   triplets   nnz × (u32 k, u32 i, u32 j, f64 w)
//!   w_r        n_p × f64
//! ```
//!
//! Floats are written as raw IEEE-754 bits, so a round trip is bit-exact.

use std::io::{self, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::ModelConfig;
use crate::place::AdjacencyTensor;
use crate::scale::{build_stacks, ScaleStack};
use crate::world::{parse_environment, EnvironmentSpec};

const MAGIC: &[u8; 8] = b"PNAVSNAP";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot I/O failed: {0}")]
    Io(#[from] io::Error),
    #[error("not a snapshot file")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    Version(u32),
    #[error("corrupt snapshot: {0}")]
    Corrupt(String),
}

/// Learned weights of every scale plus the config and arena they came from.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub model: ModelConfig,
    pub env: EnvironmentSpec,
    pub stacks: Vec<ScaleStack>,
}

impl Snapshot {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), SnapshotError> {
        w.write_all(MAGIC)?;
        w.write_u32::<LE>(SNAPSHOT_VERSION)?;
        write_str(&mut w, &toml::to_string(&self.model).expect("model config serialises"))?;
        write_str(&mut w, &self.env.to_string())?;
        w.write_u32::<LE>(self.stacks.len() as u32)?;
        for s in &self.stacks {
            write_str(&mut w, &s.name)?;
            w.write_u32::<LE>(s.place.n_cells() as u32)?;
            w.write_u32::<LE>(s.place.n_inputs() as u32)?;
            for &x in &s.place.w_pb {
                w.write_f64::<LE>(x)?;
            }
            w.write_u32::<LE>(s.adjacency.n_headings() as u32)?;
            w.write_f64::<LE>(s.adjacency.floor)?;
            w.write_u64::<LE>(s.adjacency.nnz() as u64)?;
            for (k, i, j, x) in s.adjacency.triplets() {
                w.write_u32::<LE>(k as u32)?;
                w.write_u32::<LE>(i as u32)?;
                w.write_u32::<LE>(j as u32)?;
                w.write_f64::<LE>(x)?;
            }
            for &x in &s.reward.weights {
                w.write_f64::<LE>(x)?;
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory cannot fail");
        buf
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, SnapshotError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(SnapshotError::BadMagic);
        }
        let version = r.read_u32::<LE>()?;
        if version != SNAPSHOT_VERSION {
            return Err(SnapshotError::Version(version));
        }
        let model: ModelConfig = toml::from_str(&read_str(&mut r)?)
            .map_err(|e| SnapshotError::Corrupt(format!("model config: {e}")))?;
        let env = parse_environment(&read_str(&mut r)?)
            .map_err(|e| SnapshotError::Corrupt(format!("environment: {e}")))?;
        let n_scales = r.read_u32::<LE>()? as usize;
        if n_scales != model.scales.len() {
            return Err(SnapshotError::Corrupt(format!(
                "{n_scales} scales stored but config lists {}",
                model.scales.len()
            )));
        }
        let mut stacks = build_stacks(&model, &env, 0);
        for s in &mut stacks {
            let name = read_str(&mut r)?;
            if name != s.name {
                return Err(SnapshotError::Corrupt(format!("expected scale {}, found {name}", s.name)));
            }
            let n_p = r.read_u32::<LE>()? as usize;
            let n_b = r.read_u32::<LE>()? as usize;
            if n_p != s.place.n_cells() || n_b != s.place.n_inputs() {
                return Err(SnapshotError::Corrupt(format!("scale {name}: layer shape mismatch")));
            }
            for x in s.place.w_pb.iter_mut() {
                *x = r.read_f64::<LE>()?;
            }
            let n_hd = r.read_u32::<LE>()? as usize;
            let floor = r.read_f64::<LE>()?;
            let nnz = r.read_u64::<LE>()? as usize;
            let mut entries = Vec::with_capacity(nnz.min(1 << 24));
            for _ in 0..nnz {
                let k = r.read_u32::<LE>()? as usize;
                let i = r.read_u32::<LE>()? as usize;
                let j = r.read_u32::<LE>()? as usize;
                let x = r.read_f64::<LE>()?;
                if k >= n_hd || i >= n_p || j >= n_p {
                    return Err(SnapshotError::Corrupt(format!("scale {name}: index out of range")));
                }
                entries.push((k, i, j, x));
            }
            s.adjacency = AdjacencyTensor::from_triplets(n_hd, n_p, floor, entries);
            for x in s.reward.weights.iter_mut() {
                *x = r.read_f64::<LE>()?;
            }
        }
        Ok(Self { model, env, stacks })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SnapshotError> {
        let f = std::fs::File::create(path)?;
        let mut w = io::BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SnapshotError> {
        let f = std::fs::File::open(path)?;
        Self::read_from(io::BufReader::new(f))
    }

    /// Short SHA-256 of the serialised snapshot.
    pub fn hash(&self) -> String {
        stacks_hash(&self.to_bytes())
    }
}

pub(crate) fn stacks_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

fn write_str<W: Write>(w: &mut W, s: &str) -> io::Result<()> {
    w.write_u64::<LE>(s.len() as u64)?;
    w.write_all(s.as_bytes())
}

fn read_str<R: Read>(r: &mut R) -> Result<String, SnapshotError> {
    let len = r.read_u64::<LE>()? as usize;
    if len > 1 << 30 {
        return Err(SnapshotError::Corrupt("string length out of range".into()));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    String::from_utf8(buf).map_err(|_| SnapshotError::Corrupt("invalid UTF-8".into()))
}
