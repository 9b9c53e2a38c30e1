use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use super::counts::{CountsTable, SourceCounts};
use super::SimError;
use crate::detection::{EffectiveState, BasisJoints};

/// Bootstrap replicas used for every error bar.
pub const BOOTSTRAP_REPLICAS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateWithError {
    pub value: f64,
    /// One standard deviation.
    pub sigma: f64,
}

/// Standard deviation of `f` over Poisson resamples of `tallies`.
///
/// Replicas where `f` is undefined are skipped.
pub fn poisson_bootstrap(tallies: &[u64], replicas: usize, seed: u64, f: impl Fn(&[f64]) -> Option<f64>) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dists: Vec<Option<Poisson<f64>>> =
        tallies.iter().map(|&n| if n > 0 { Poisson::new(n as f64).ok() } else { None }).collect();
    let mut buf = vec![0.0; tallies.len()];
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for _ in 0..replicas {
        for (slot, d) in buf.iter_mut().zip(&dists) {
            *slot = d.as_ref().map_or(0.0, |d| d.sample(&mut rng));
        }
        if let Some(v) = f(&buf) {
            n += 1;
            let delta = v - mean;
            mean += delta / n as f64;
            m2 += delta * (v - mean);
        }
    }
    if n < 2 {
        0.0
    } else {
        (m2 / (n - 1) as f64).sqrt()
    }
}

fn contrast(c: f64, n: f64) -> Option<f64> {
    let t = c + n;
    (t > 0.0).then(|| (c - n).abs() / t)
}

/// Visibility from correlated and anti-correlated counts.
pub fn visibility_from_counts(c: u64, n: u64, seed: u64) -> Result<EstimateWithError, SimError> {
    let value = contrast(c as f64, n as f64).ok_or(SimError::UndefinedEstimate("no coincidences"))?;
    let sigma = poisson_bootstrap(&[c, n], BOOTSTRAP_REPLICAS, seed, |x| contrast(x[0], x[1]));
    Ok(EstimateWithError { value, sigma })
}

/// Pooled visibility of all sources.
pub fn estimate_visibility(counts: &CountsTable, seed: u64) -> Result<EstimateWithError, SimError> {
    let (c, n) = counts.pooled().contrast(counts.basis);
    visibility_from_counts(c, n, seed)
}

/// Visibility of each source on its own.
pub fn estimate_source_visibilities(counts: &CountsTable, seed: u64) -> Vec<Result<EstimateWithError, SimError>> {
    counts
        .sources
        .iter()
        .enumerate()
        .map(|(i, s): (usize, &SourceCounts)| {
            let (c, n) = s.contrast(counts.basis);
            visibility_from_counts(c, n, seed.wrapping_add(i as u64 + 1))
        })
        .collect()
}

/// Coincidence tallies `[stokes][anti_stokes]` at one analyzer setting.
pub type SettingCounts = [[u64; 2]; 2];

fn correlator(j: &[f64]) -> Option<f64> {
    let t: f64 = j.iter().sum();
    (t > 0.0).then(|| (j[0] + j[3] - j[1] - j[2]) / t)
}

fn chsh_flat(x: &[f64]) -> Option<f64> {
    let e: Vec<f64> = x.chunks(4).map(correlator).collect::<Option<_>>()?;
    Some((e[0] - e[1] + e[2] + e[3]).abs())
}

/// CHSH parameter from coincidences at the settings (s,t), (s,t'), (s',t), (s',t').
pub fn estimate_chsh(settings: &[SettingCounts; 4], seed: u64) -> Result<EstimateWithError, SimError> {
    let flat: Vec<u64> = settings.iter().flat_map(|s| s.iter().flatten().copied()).collect();
    let as_f: Vec<f64> = flat.iter().map(|&n| n as f64).collect();
    let value = chsh_flat(&as_f).ok_or(SimError::UndefinedEstimate("a setting has no coincidences"))?;
    let sigma = poisson_bootstrap(&flat, BOOTSTRAP_REPLICAS, seed, chsh_flat);
    Ok(EstimateWithError { value, sigma })
}

/// Unweighted mean of per-source estimates; errors add in quadrature.
pub fn estimate_average_bell(per_source: &[EstimateWithError]) -> Result<EstimateWithError, SimError> {
    if per_source.is_empty() {
        return Err(SimError::UndefinedEstimate("no per-source estimates"));
    }
    let m = per_source.len() as f64;
    let value = per_source.iter().map(|e| e.value).sum::<f64>() / m;
    let sigma = per_source.iter().map(|e| e.sigma * e.sigma).sum::<f64>().sqrt() / m;
    Ok(EstimateWithError { value, sigma })
}

/// `n / trials` with Poisson error.
pub fn per_trial(n: u64, trials: u64) -> EstimateWithError {
    if trials == 0 {
        return EstimateWithError { value: 0.0, sigma: 0.0 };
    }
    let t = trials as f64;
    EstimateWithError { value: n as f64 / t, sigma: (n as f64).sqrt() / t }
}

fn joints_f64(counts: &[&SourceCounts; 3]) -> BasisJoints<f64> {
    counts.map(|c| c.joints.map(|r| r.map(|n| n as f64)))
}

/// Bell parameter and fidelity of the state reconstructed from HV, DA and RL
/// coincidence counts, with bootstrap errors.
pub fn estimate_effective_state(
    hv: &SourceCounts,
    da: &SourceCounts,
    rl: &SourceCounts,
    theta: f64,
    seed: u64,
) -> Result<(EstimateWithError, EstimateWithError), SimError> {
    let e = EffectiveState::from_joints(&joints_f64(&[hv, da, rl]), theta)?;
    let flat: Vec<u64> = [hv, da, rl].iter().flat_map(|c| c.joints.iter().flatten().copied()).collect();
    let rebuild = |x: &[f64]| {
        let mut j = [[[0.0; 2]; 2]; 3];
        for (k, v) in x.iter().enumerate() {
            j[k / 4][(k % 4) / 2][k % 2] = *v;
        }
        EffectiveState::from_joints(&j, theta).ok()
    };
    let s_sigma = poisson_bootstrap(&flat, BOOTSTRAP_REPLICAS, seed, |x| rebuild(x).map(|e| e.chsh));
    let f_sigma = poisson_bootstrap(&flat, BOOTSTRAP_REPLICAS, seed, |x| rebuild(x).map(|e| e.fidelity));
    Ok((EstimateWithError { value: e.chsh, sigma: s_sigma }, EstimateWithError { value: e.fidelity, sigma: f_sigma }))
}
