//! Configuration, experiment drivers and artifact output for the `riglid`
//! command-line tool.
pub mod config;
pub mod experiments;
pub mod output;
pub mod tolerances;

pub use config::{DataFamily, Experiment, ResolvedConfig, RunConfig};
pub use experiments::{run_experiment, Assertion, Cell, Outcome, Table};
pub use output::{csv_bytes, run, write_atomic, Manifest};
