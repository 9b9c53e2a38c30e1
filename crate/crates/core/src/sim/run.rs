use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::counts::CountsTable;
use super::sampler::CycleSampler;
use super::{decayed_interface, SimError, TimingConfig};
use crate::detection::InterfaceParams;
use crate::quantum::{Detector, PolarizationBasis};

/// Cycles per independently seeded block. Part of the reproducibility
/// contract: changing it changes every result.
pub const BLOCK_CYCLES: u64 = 10_000;

fn idx(d: Detector) -> usize {
    match d {
        Detector::One => 0,
        Detector::Two => 1,
    }
}

fn run_block(sampler: &CycleSampler, basis: PolarizationBasis, m: usize, seed: u64, block: u64, cycles: u64) -> CountsTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut t = CountsTable::new(basis, m);
    for _ in 0..cycles {
        let o = sampler.sample(&mut rng);
        t.trials += u64::from(o.trials_consumed);
        if let (Some(i), Some(s)) = (o.fired_source, o.stokes_detector) {
            let c = &mut t.sources[i];
            c.stokes[idx(s)] += 1;
            match o.anti_stokes_detector {
                Some(a) => c.joints[idx(s)][idx(a)] += 1,
                None => c.stokes_only += 1,
            }
        }
    }
    t.cycles = cycles;
    t
}

/// Simulates `cycles` write-read cycles, applying the storage-time decay in
/// `timing` to every source first.
///
/// Cycles are split into blocks of [`BLOCK_CYCLES`]; block `k` draws from
/// stream `k` of a ChaCha8 generator keyed by `seed`, so the tallies do not
/// depend on the number of worker threads.
pub fn run_simulation(
    seed: u64,
    ip: &InterfaceParams<f64>,
    timing: &TimingConfig,
    basis: PolarizationBasis,
    cycles: u64,
) -> Result<CountsTable, SimError> {
    if cycles == 0 {
        return Err(SimError::Config("cycles must be at least 1".into()));
    }
    timing.validate().map_err(SimError::Config)?;
    let ip = decayed_interface(ip, timing);
    let sampler = CycleSampler::new(&ip, basis, timing.max_trials)?;
    let m = ip.m();
    let blocks = cycles.div_ceil(BLOCK_CYCLES);
    let parts: Vec<CountsTable> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_CYCLES.min(cycles - b * BLOCK_CYCLES);
            run_block(&sampler, basis, m, seed, b, n)
        })
        .collect();
    let mut total = CountsTable::new(basis, m);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::SourceParams;

    fn ip() -> InterfaceParams<f64> {
        let s = SourceParams::ideal(0.02, 0.636, 0.157, 0.29, 0.29);
        InterfaceParams::new(vec![s; 3], 6.7e5).unwrap()
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let t = TimingConfig::default();
        let a = run_simulation(7, &ip(), &t, PolarizationBasis::HV, 25_000).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_simulation(7, &ip(), &t, PolarizationBasis::HV, 25_000).unwrap());
        assert_eq!(a, b);
        let c = run_simulation(8, &ip(), &t, PolarizationBasis::HV, 25_000).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_free_hv_has_no_cross_coincidences() {
        // Only accidental pairs, of relative order chi, can land in the cross channels.
        let weak = ip().with_common_chi(1e-4);
        let a = run_simulation(3, &weak, &TimingConfig::default(), PolarizationBasis::HV, 50_000).unwrap();
        for s in &a.sources {
            assert_eq!(s.joints[0][1], 0);
            assert_eq!(s.joints[1][0], 0);
            assert!(s.coincidences() <= s.fired());
        }
        assert_eq!(a.cycles, 50_000);
        assert!(a.pooled().coincidences() > 0);
    }
}
