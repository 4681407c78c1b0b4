//! Denial-of-service attacks on C-V2X Mode 4 semi-persistent scheduling:
//! a slotted Monte-Carlo simulator, closed-form collision analysis, and the
//! experiment plumbing around them.

pub mod analysis;
pub mod attack;
#[cfg(feature = "cli")]
pub mod cli;
pub mod engine;
pub mod io;
pub mod model;
pub mod protocol;
pub mod stats;
pub mod validate;

pub use engine::{run_experiment, run_sweep, run_trial, ExperimentResult, SweepAxis, SweepPoint};
pub use model::{AttackType, ConfigError, Role, SimConfig, TrialResult};
