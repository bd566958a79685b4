//! Command-line front end: sweeps from config files, reports, KL comparisons,
//! inverse-CDF plots and the pendulum learner comparison.

pub mod commands;
pub mod config;
pub mod error;
pub mod figure1;
pub mod svg;

pub use error::{CliError, CliResult};
