//! Sweeps, floor and diversity tables, and oracle certification for the
//! `secrecy-sched` command.

pub mod config;
mod error;
pub mod figures;
pub mod report;
pub mod sweep;

pub use config::{parse_config, Axis, SweepSpec};
pub use error::{CliError, CliResult};
pub use figures::figure_spec;
pub use sweep::{run_sweep, sweep_csv, to_csv, Row};
