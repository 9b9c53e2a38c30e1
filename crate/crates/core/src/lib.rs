//! Model of a spatially multiplexed atom-photon entanglement interface.
//!
//! Several write-read sources share one feed-forward controller: the first
//! Stokes click stops the write sequence and the switch routes that source's
//! retrieved photon to a common analyzer. The crate covers
//!
//! - two-qubit states, analyzers, CHSH and tomography ([`quantum`]),
//! - closed-form detection probabilities, rates and visibilities ([`detection`]),
//! - a seeded Monte Carlo of the same process ([`sim`]),
//! - repeater link and chain figures ([`repeater`]),
//! - scenario files, calibration and CSV output ([`scenario`]).
//!
//! The math is generic over [`scalar::Real`]; the aliases below fix it to
//! `f64` or `f32`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod quantum;
pub mod repeater;
pub mod scalar;
pub mod scenario;
pub mod sim;

pub use scalar::Real;

pub type SourceParamsF64 = detection::SourceParams<f64>;
pub type SourceParamsF32 = detection::SourceParams<f32>;
pub type InterfaceParamsF64 = detection::InterfaceParams<f64>;
pub type InterfaceParamsF32 = detection::InterfaceParams<f32>;
pub type NoiseModelF64 = detection::NoiseModel<f64>;
pub type NoiseModelF32 = detection::NoiseModel<f32>;
pub type PureStateF64 = quantum::PureState<f64>;
pub type PureStateF32 = quantum::PureState<f32>;
pub type DensityMatrixF64 = quantum::DensityMatrix<f64>;
pub type DensityMatrixF32 = quantum::DensityMatrix<f32>;
pub type ChainParamsF64 = repeater::ChainParams<f64>;
pub type ChainParamsF32 = repeater::ChainParams<f32>;
pub type LinkParamsF64 = repeater::LinkParams<f64>;
pub type LinkParamsF32 = repeater::LinkParams<f32>;
