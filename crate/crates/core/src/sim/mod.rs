//! Monte Carlo replay of the feed-forward write/read cycle and the counting
//! estimators applied to its output.

mod counts;
mod estimate;
mod run;
mod sampler;
mod timing;

pub use counts::{CountsTable, SourceCounts};
pub use estimate::{
    estimate_average_bell, estimate_chsh, estimate_effective_state, estimate_source_visibilities, estimate_visibility,
    per_trial, poisson_bootstrap, visibility_from_counts, EstimateWithError, SettingCounts, BOOTSTRAP_REPLICAS,
};
pub use run::{run_simulation, BLOCK_CYCLES};
pub use sampler::{sample_cycle, CycleOutcome, CycleSampler};
pub use timing::{apply_decay, decayed_interface, TimingConfig};

use crate::detection::DetectionError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation setup: {0}")]
    Config(String),
    #[error("estimate undefined: {0}")]
    UndefinedEstimate(&'static str),
    #[error(transparent)]
    Detection(#[from] DetectionError),
}
