//! Planted subgraph detection on Erdős–Rényi graphs.
//!
//! - [`graph`]: immutable graphs, exact invariants (`μ`, `τ`, `|Aut|`), copy
//!   counting and built-in families.
//! - [`sampler`]: seeded null and planted observations.
//! - [`detectors`]: count, degree, scan and exact likelihood-ratio tests.
//! - [`moments`]: likelihood second moments and low-degree norms.
//! - [`analysis`]: balanced decomposition and regime threshold formulas.

pub mod error;
pub mod graph;

pub use error::{Error, Result};
pub mod sampler;
pub mod detectors;
pub mod moments;
pub mod analysis;
