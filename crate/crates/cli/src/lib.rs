//! Experiment driver for the `semilag` solvers: convergence tables in three
//! step-size regimes and phase-shift sweeps, written as CSV (and SVG for
//! phase charts).

pub mod config;
pub mod converge;
pub mod error;
pub mod phase;
pub mod svg;

pub use config::{Command, ExperimentConfig, Regime};
pub use converge::{run_convergence, ConvergenceReport};
pub use error::{CliError, Result};
pub use phase::run_phase;
