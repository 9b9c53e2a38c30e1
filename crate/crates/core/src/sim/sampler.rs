use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Geometric;

use super::SimError;
use crate::detection::{source_rows, InterfaceParams, ProbRow};
use crate::quantum::{Detector, PolarizationBasis};

/// Result of one write-read cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleOutcome {
    /// Zero-based index of the source that heralded.
    pub fired_source: Option<usize>,
    pub stokes_detector: Option<Detector>,
    pub anti_stokes_detector: Option<Detector>,
    pub trials_consumed: u32,
}

#[derive(Debug, Clone)]
struct SourceLaw {
    p_stokes_x: f64,
    /// Anti-Stokes `[none, x, y]` weights given a Stokes click on x, then on y.
    after_x: [f64; 3],
    after_y: [f64; 3],
}

/// Pre-computed sampling tables for one interface and basis.
#[derive(Debug, Clone)]
pub struct CycleSampler {
    first_click: Option<Geometric>,
    herald: f64,
    which: Option<WeightedIndex<f64>>,
    laws: Vec<SourceLaw>,
    max_trials: u32,
}

const SLACK: f64 = 1e-12;

fn conditional(joint_x: f64, joint_y: f64, single: f64, eta: f64) -> Result<[f64; 3], SimError> {
    if single <= 0.0 {
        return Ok([1.0, 0.0, 0.0]);
    }
    let (x, y) = (joint_x / single * eta, joint_y / single * eta);
    if x + y > 1.0 + SLACK {
        return Err(SimError::Config(format!(
            "coincidence probability {} exceeds its Stokes marginal {single}",
            joint_x + joint_y
        )));
    }
    Ok([(1.0 - x - y).max(0.0), x, y])
}

impl CycleSampler {
    /// `ip` should already carry the storage-time decay.
    pub fn new(ip: &InterfaceParams<f64>, basis: PolarizationBasis, max_trials: u32) -> Result<Self, SimError> {
        for s in &ip.sources {
            if s.chi >= 1.0 {
                return Err(SimError::Config("excitation probability must be below 1".into()));
            }
        }
        let rows: Vec<ProbRow<f64>> = source_rows(ip, basis)?;
        let mut laws = Vec::with_capacity(rows.len());
        let mut weights = Vec::with_capacity(rows.len());
        let mut none_yet = 1.0;
        for (i, r) in rows.iter().enumerate() {
            let p_s = r.p_s();
            if p_s > 1.0 + SLACK {
                return Err(SimError::Config(format!("source {} Stokes probability {p_s} exceeds 1", i + 1)));
            }
            let eta = ip.routed_eta(i);
            laws.push(SourceLaw {
                p_stokes_x: if p_s > 0.0 { r.s_x / p_s } else { 0.5 },
                after_x: conditional(r.xx, r.xy, r.s_x, eta)?,
                after_y: conditional(r.yx, r.yy, r.s_y, eta)?,
            });
            weights.push(none_yet * p_s);
            none_yet *= 1.0 - p_s.min(1.0);
        }
        let q = 1.0 - none_yet;
        let (first_click, which) = if q > 0.0 {
            let g = Geometric::new(q).map_err(|e| SimError::Config(e.to_string()))?;
            let w = WeightedIndex::new(&weights).map_err(|e| SimError::Config(e.to_string()))?;
            (Some(g), Some(w))
        } else {
            (None, None)
        };
        Ok(Self { first_click, herald: q, which, laws, max_trials })
    }

    /// Probability that a single write trial heralds on any source.
    pub fn herald_probability(&self) -> f64 {
        self.herald
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CycleOutcome {
        let idle = CycleOutcome {
            fired_source: None,
            stokes_detector: None,
            anti_stokes_detector: None,
            trials_consumed: self.max_trials,
        };
        let (Some(geo), Some(which)) = (&self.first_click, &self.which) else {
            return idle;
        };
        let failures = geo.sample(rng);
        if failures >= u64::from(self.max_trials) {
            return idle;
        }
        let i = which.sample(rng);
        let law = &self.laws[i];
        let (s, cond) = if rng.random::<f64>() < law.p_stokes_x {
            (Detector::One, &law.after_x)
        } else {
            (Detector::Two, &law.after_y)
        };
        let u = rng.random::<f64>();
        let t = if u < cond[1] {
            Some(Detector::One)
        } else if u < cond[1] + cond[2] {
            Some(Detector::Two)
        } else {
            None
        };
        CycleOutcome {
            fired_source: Some(i),
            stokes_detector: Some(s),
            anti_stokes_detector: t,
            trials_consumed: failures as u32 + 1,
        }
    }
}

/// Draws one cycle with a freshly built sampler.
pub fn sample_cycle<R: Rng + ?Sized>(
    rng: &mut R,
    ip: &InterfaceParams<f64>,
    timing: &super::TimingConfig,
    basis: PolarizationBasis,
) -> Result<CycleOutcome, SimError> {
    let ip = super::decayed_interface(ip, timing);
    Ok(CycleSampler::new(&ip, basis, timing.max_trials)?.sample(rng))
}
