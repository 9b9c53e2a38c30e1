#![allow(dead_code)]

use muxsim::detection::{InterfaceParams, SourceParams};
use muxsim::quantum::{DensityMatrix, Matrix4C, C};
use muxsim::scenario::{DEFAULT_ETA_RC, DEFAULT_ETA_S, DEFAULT_ETA_T, DEFAULT_GAMMA};
use rand::Rng;
use rand_distr::StandardNormal;

/// `G G^dag / tr` from 32 reals (real parts then imaginary parts). `rank`
/// keeps only the first columns of `G`.
pub fn density_from(values: &[f64], rank: usize) -> DensityMatrix<f64> {
    let mut g = Matrix4C::<f64>::zeros();
    for i in 0..4 {
        for j in 0..rank.clamp(1, 4) {
            g[(i, j)] = C::new(values[4 * i + j], values[16 + 4 * i + j]);
        }
    }
    let mut m = g * g.adjoint();
    let tr = m.trace().re;
    if tr < 1e-12 {
        return DensityMatrix::maximally_mixed();
    }
    m /= C::new(tr, 0.0);
    // Enforce exact hermiticity before validation.
    let m = (m + m.adjoint()) * C::new(0.5, 0.0);
    DensityMatrix::new(m).expect("G G^dag is a state")
}

/// Ginibre state of random rank.
pub fn random_density<R: Rng>(rng: &mut R) -> DensityMatrix<f64> {
    let v: Vec<f64> = (0..32).map(|_| rng.sample(StandardNormal)).collect();
    density_from(&v, rng.random_range(1..=4))
}

/// Six sources with the measured efficiencies and a common excitation
/// probability, no noise.
pub fn table_interface(chi: f64) -> InterfaceParams<f64> {
    let theta = (0.81f64 * 45.0).to_radians();
    let sources = (0..6)
        .map(|i| SourceParams {
            eta_rc: DEFAULT_ETA_RC[i],
            ..SourceParams::ideal(chi, theta, DEFAULT_GAMMA[i], DEFAULT_ETA_S[i], DEFAULT_ETA_T[i])
        })
        .collect();
    InterfaceParams::new(sources, 6.7e5).unwrap()
}
