//! Elementary-link success, nested-chain distribution time and link quality
//! for a repeater built from multiplexed interfaces.

mod bsm;
mod chain;
mod link;
mod quality;

pub use bsm::{bsm_branches, bsm_project, same_polarization_amplitude, swapped_target, BsmBranch, BsmOutcome, BsmResult};
pub use chain::{speedup, total_time, ChainParams, TotalTime, FIBER_LIGHT_SPEED_KM_S};
pub use link::{
    channel_spread, link_success_multiplexed, link_success_priority, link_success_single, mean_channel_success,
    multiplexed_from_single, swap_success_probability, LinkParams, ATTENUATION_LENGTH_KM, BSM_EFFICIENCY,
    CHANNEL_SPREAD_LIMIT,
};
pub use quality::{
    composite_link_quality, link_chsh_from_chsh, link_fidelity_from_fidelities, ChannelQuality, CompositeLinkQuality,
    LinkQuality,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepeaterError {
    #[error("parameter `{field}` = {value} is out of range")]
    InvalidParam { field: &'static str, value: f64 },
    #[error("end A has {a} channels but end B has {b}")]
    ChannelMismatch { a: usize, b: usize },
    #[error("nesting level {nesting} needs that many swap probabilities, got {given}")]
    NestingMismatch { nesting: u32, given: usize },
    #[error("elementary length {l0} km does not match L / 2^n = {expected} km")]
    LengthMismatch { l0: f64, expected: f64 },
}
