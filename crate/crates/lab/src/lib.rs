//! Monte-Carlo risk harness, parameter sweeps and the `plantlab` command
//! line built on `plantlab-core`.

pub mod cli;
pub mod harness;
pub mod sweep;

pub use cli::run_command;
pub use harness::{estimate_risk, Detector, DetectorKind, RiskEstimate};
pub use sweep::{sweep_grid, SweepRow, SweepSpec};
