use serde::{Deserialize, Serialize};

use crate::detection::{InterfaceParams, SourceParams};
use crate::scalar::{lit, Real};

/// Write-trial cadence and memory storage settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    /// Write trials per second.
    pub rate: f64,
    /// Write trials before the cycle gives up.
    pub max_trials: u32,
    /// Storage time before the read pulse, microseconds.
    pub storage_time_us: f64,
    /// Gaussian memory lifetime, microseconds.
    pub lifetime_us: f64,
    /// Zero-delay retrieval efficiency; when absent each source's own
    /// `gamma` is taken as its zero-delay value.
    pub gamma0: Option<f64>,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self { rate: 6.7e5, max_trials: 6600, storage_time_us: 1.0, lifetime_us: 66.7, gamma0: None }
    }
}

impl TimingConfig {
    /// `exp(-dt^2 / tau^2)`.
    pub fn decay_factor(&self) -> f64 {
        (-(self.storage_time_us / self.lifetime_us).powi(2)).exp()
    }

    pub fn with_storage_time(mut self, us: f64) -> Self {
        self.storage_time_us = us;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [("rate", self.rate), ("lifetime_us", self.lifetime_us)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.storage_time_us >= 0.0 && self.storage_time_us.is_finite()) {
            return Err(format!("storage_time_us must be non-negative, got {}", self.storage_time_us));
        }
        if self.max_trials == 0 {
            return Err("max_trials must be at least 1".into());
        }
        if let Some(g) = self.gamma0 {
            if !(0.0..=1.0).contains(&g) {
                return Err(format!("gamma0 must lie in [0, 1], got {g}"));
            }
        }
        Ok(())
    }
}

/// Source with its retrieval efficiency decayed to the configured storage time.
pub fn apply_decay<T: Real>(p: &SourceParams<T>, t: &TimingConfig) -> SourceParams<T> {
    let g0 = t.gamma0.map(lit::<T>).unwrap_or(p.gamma);
    SourceParams { gamma: g0 * lit(t.decay_factor()), ..*p }
}

pub fn decayed_interface<T: Real>(ip: &InterfaceParams<T>, t: &TimingConfig) -> InterfaceParams<T> {
    InterfaceParams { sources: ip.sources.iter().map(|s| apply_decay(s, t)).collect(), ..ip.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn at(us: f64) -> TimingConfig {
        TimingConfig { gamma0: Some(0.157), ..TimingConfig::default() }.with_storage_time(us)
    }

    #[test]
    fn decay_law() {
        let p = SourceParams::ideal(0.01, 0.6, 0.2, 0.29, 0.29);
        assert_abs_diff_eq!(apply_decay(&p, &at(0.0)).gamma, 0.157, epsilon = 1e-15);
        assert_abs_diff_eq!(apply_decay(&p, &at(66.7)).gamma, 0.157 / std::f64::consts::E, epsilon = 1e-15);
        assert_abs_diff_eq!(apply_decay(&p, &at(51.0)).gamma, 0.0874970949, epsilon = 1e-9);
        let q = apply_decay(&p, &at(51.0));
        assert_eq!((q.chi, q.eta_s, q.eta_t, q.theta), (p.chi, p.eta_s, p.eta_t, p.theta));
    }

    #[test]
    fn own_gamma_is_the_baseline() {
        let p = SourceParams::ideal(0.01, 0.6, 0.2, 0.29, 0.29);
        let t = TimingConfig::default().with_storage_time(0.0);
        assert_eq!(apply_decay(&p, &t).gamma, 0.2);
    }
}
