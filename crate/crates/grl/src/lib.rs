//! File formats, reports and the command-line driver for [`grl_core`].
//!
//! Scenarios and capacities are read from JSON (see [`format`]), integrated
//! with the core engine and rendered either for people or as structured
//! JSON (see [`report`]). Exact values always travel as `"p/q"` strings.

use std::path::Path;

pub mod examples;
pub mod format;
pub mod report;
pub mod sweep;

pub use format::{parse_capacity, parse_scenario, scenario_to_json};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{file}:{line}:{column}: {message}")]
    Parse { file: String, line: usize, column: usize, message: String },
    #[error("{file}:{line}:{column}: {error}")]
    Invalid { file: String, line: usize, column: usize, error: grl_core::Error },
    #[error("{path}: {error}")]
    Io { path: String, error: std::io::Error },
}

pub fn read_text(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|error| InputError::Io { path: path.display().to_string(), error })
}

pub fn load_scenario(path: &Path) -> Result<grl_core::grl::Scenario, InputError> {
    parse_scenario(&read_text(path)?, &path.display().to_string())
}

pub fn load_capacity(path: &Path) -> Result<grl_core::Capacity, InputError> {
    parse_capacity(&read_text(path)?, &path.display().to_string())
}
