//! Experiment harness for the jointly-sparse recovery simulators:
//! configuration files, seeded ensemble sweeps, CSV persistence, aggregate
//! statistics and static SVG plots.

pub mod config;
pub mod plot;
pub mod summarize;
pub mod sweep;

pub use config::{ExperimentConfig, PointOverride, Sweep, SweepPoint, TopologyKind};
pub use sweep::{run_sweep, run_sweep_to_csv, SweepRow};
