//! Configuration-driven sweeps of real-space topological invariants.

pub mod config;
pub mod sweep;
pub mod verify;

pub use config::{ConfigError, SweepConfig};
pub use sweep::{run_sweep, write_sweep, ResultRecord, CODE_VERSION};
pub use verify::{verify_suite, Level};
