//! Scenario files, calibration, sweep orchestration and CSV output.

mod calibrate;
mod config;
mod output;
mod chain;
mod sweep;
mod tomography;

pub use calibrate::{
    calibrate_basis_noise, calibrate_linear, law_prediction, CalibrationError, CalibrationResult, NoiseCalibration,
};
pub use chain::{repeater_table, run_repeater, RepeaterRow};
pub use config::{
    emit_scenario, load_scenario, BasisTargets, CalibrationConfig, InterfaceConfig, Mode, PerSource, RepeaterConfig,
    ScenarioConfig, SweepAxis, SweepConfig, TimingSection, BELL_TABLE, DEFAULT_ETA_RC, DEFAULT_ETA_S, DEFAULT_ETA_T,
    DEFAULT_GAMMA,
};
pub use output::{derive_seed, write_csv, Metadata, Table};
pub use sweep::{calibrate_scenario, prepare, run_sweep, sweep_table, Prepared, SweepRow};
pub use tomography::{run_tomography, tomography_table, TomographyRow};

use thiserror::Error;

use crate::detection::DetectionError;
use crate::repeater::RepeaterError;
use crate::sim::SimError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },
    #[error("`{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid { field: field.into(), message: message.into() }
    }
}

/// Failure of a whole run, split by who is at fault.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl ScenarioError {
    /// 2 for a bad scenario, 3 for everything that fails while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) => 2,
            _ => 3,
        }
    }

    pub(crate) fn at(context: impl std::fmt::Display, e: impl std::fmt::Display) -> Self {
        ScenarioError::Runtime(format!("{context}: {e}"))
    }
}

impl From<DetectionError> for ScenarioError {
    fn from(e: DetectionError) -> Self {
        ScenarioError::Runtime(e.to_string())
    }
}

impl From<SimError> for ScenarioError {
    fn from(e: SimError) -> Self {
        ScenarioError::Runtime(e.to_string())
    }
}

impl From<RepeaterError> for ScenarioError {
    fn from(e: RepeaterError) -> Self {
        ScenarioError::Runtime(e.to_string())
    }
}

impl From<CalibrationError> for ScenarioError {
    fn from(e: CalibrationError) -> Self {
        ScenarioError::Runtime(format!("calibration: {e}"))
    }
}
