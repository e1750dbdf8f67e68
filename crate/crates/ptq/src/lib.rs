//! Scenario runner for no-signaling checks on bipartite PT-symmetric systems.
//!
//! A run prepares a pure state over two subsystems, evolves one of them over a
//! time grid and records the reduced spectrum and entanglement entropy of the
//! other. Reports are emitted as CSV or JSON; see [`report`].

pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use config::{Axis, CoeffList, OutputFormat, RunArgs, Scenario, ScenarioConfig};
pub use error::ExperimentError;
pub use report::{PhaseInfo, RunReport, SampleRow, SweepPoint, SweepReport};
pub use runner::{random_coeffs, run_scenario, sweep, time_grid};
