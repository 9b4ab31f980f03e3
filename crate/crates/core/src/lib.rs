//! Multiscale place-cell navigation: a LiDAR agent builds place fields at
//! several spatial scales, learns directional adjacency between them and a
//! replay-trained reward map, and steers by fusing one-step preplay
//! predictions across scales.

pub mod bvc;
pub mod config;
pub mod harness;
pub mod navigator;
pub mod orientation;
pub mod place;
pub mod scale;
pub mod snapshot;
pub mod valuation;
pub mod world;
