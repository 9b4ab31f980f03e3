//! Place-cell layers: membrane dynamics, competitive BVC→PC learning,
//! activity traces and the heading-gated adjacency tensor.

mod adjacency;
mod layer;
mod traces;

pub use adjacency::{AdjacencyTensor, DEFAULT_MATERIALIZE_FLOOR};
pub use layer::{ActivitySnapshot, PlaceLayer, PlaceParams, PlasticityConfig};
pub use traces::TraceState;
