//! Front end for the hybrid two-level simulator: scenario configuration,
//! figure presets and CSV output.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod scenario;

pub use config::{Method, Output, Overrides, Picture, ScenarioConfig};
pub use error::{CliError, Result};
pub use presets::FigurePreset;
pub use scenario::{run_scenario, select_branch, validate, Branch};
