//! Closed-form click, coincidence and visibility model of single and
//! multiplexed sources.

mod effective;
mod enhancement;
mod law;
mod multiplex;
mod params;
mod rates;
mod table;

pub use effective::{interface_effective_state, pauli_from_joints, per_source_effective_states, BasisJoints, EffectiveState};
pub use enhancement::{
    enhancement_at_chi, enhancement_limit, fixed_visibility_enhancement, mean_single_rates, mean_single_visibility,
    Enhancement,
};
pub use law::{visibility_from_chsh, werner_fidelity, LinearVisibilityLaw};
pub use multiplex::{
    composite_visibility, composite_visibility_pooled, composite_visibility_weighted, depletion_factors,
    interface_stokes_probability, multiplexed_prob_table, multiplexed_rates, solve_common_chi, source_rows,
};
pub use params::{BasisNoise, Depletion, InterfaceParams, NoiseModel, Routing, SourceParams, FIRST_ORDER_LIMIT};
pub use rates::{single_source_rates, single_source_visibility, visibility_fit, Rates, VisibilityFit};
pub use table::{prob_table, ProbRow};
pub(crate) use multiplex::bisect;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectionError {
    #[error("parameter `{field}` = {value} is out of range")]
    InvalidParam { field: &'static str, value: f64 },
    #[error("interface has no sources")]
    EmptyInterface,
    #[error("{quantity} = {value} is not a probability; parameters are outside the first-order regime")]
    OutOfRegime { quantity: &'static str, value: f64 },
    #[error("visibility undefined: no coincidences")]
    UndefinedVisibility,
    #[error("no excitation probability reaches target {target}")]
    NoSolution { target: f64 },
}
