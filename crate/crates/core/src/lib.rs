//! Replica placement, request matching and rate bounds for a cluster of
//! caches behind a central server.
//!
//! Contents are indexed from 0 in decreasing order of popularity. Text
//! formats exchanged with users (placement files, traces) are 1-based.
//!
//! Random numbers come from ChaCha8 keyed by a SplitMix64 expansion of a
//! 64-bit seed (see [`rng`]), so every result is reproducible across
//! platforms.

pub mod bounds;
pub mod error;
pub mod knapsack;
pub mod matching;
pub mod placement;
pub mod popularity;
pub mod registry;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use placement::{PlacementPlan, Setting, SystemConfig};
pub use popularity::{build_zipf, build_zipf_mandelbrot, sample_batch, PopularityModel, RequestBatch};
pub use registry::Named;
