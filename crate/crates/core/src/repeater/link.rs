use serde::{Deserialize, Serialize};

use super::RepeaterError;
use crate::scalar::{lit, to_f64, Real};

/// Fiber attenuation length at telecom wavelength, km.
pub const ATTENUATION_LENGTH_KM: f64 = 22.0;
/// Success probability of the linear-optics Bell measurement.
pub const BSM_EFFICIENCY: f64 = 0.5;
/// Largest relative spread of per-channel link probabilities for which the
/// uniform-channel formula is used without complaint.
pub const CHANNEL_SPREAD_LIMIT: f64 = 0.05;

/// One elementary link between two multiplexed interfaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkParams<T> {
    pub l0_km: T,
    pub l_att_km: T,
    /// Frequency-conversion efficiency applied to each Stokes photon.
    pub eta_dc: T,
    /// Stokes detection probability per channel at end A.
    pub p_s_a: Vec<T>,
    /// Stokes detection probability per channel at end B.
    pub p_s_b: Vec<T>,
}

impl<T: Real> LinkParams<T> {
    pub fn uniform(l0_km: T, eta_dc: T, m: usize, p_s_a: T, p_s_b: T) -> Result<Self, RepeaterError> {
        let lp = Self {
            l0_km,
            l_att_km: lit(ATTENUATION_LENGTH_KM),
            eta_dc,
            p_s_a: vec![p_s_a; m],
            p_s_b: vec![p_s_b; m],
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn m(&self) -> usize {
        self.p_s_a.len()
    }

    pub fn validate(&self) -> Result<(), RepeaterError> {
        let bad = |field: &'static str, v: T| Err(RepeaterError::InvalidParam { field, value: to_f64(v) });
        if !(self.l0_km >= T::zero()) {
            return bad("l0_km", self.l0_km);
        }
        if !(self.l_att_km > T::zero()) {
            return bad("l_att_km", self.l_att_km);
        }
        if !(self.eta_dc > T::zero() && self.eta_dc <= T::one()) {
            return bad("eta_dc", self.eta_dc);
        }
        if self.p_s_a.is_empty() || self.p_s_a.len() != self.p_s_b.len() {
            return Err(RepeaterError::ChannelMismatch { a: self.p_s_a.len(), b: self.p_s_b.len() });
        }
        for &p in self.p_s_a.iter().chain(&self.p_s_b) {
            if !(p >= T::zero() && p <= T::one()) {
                return bad("p_s", p);
            }
        }
        Ok(())
    }

    fn fiber(&self) -> T {
        (-self.l0_km / self.l_att_km).exp()
    }
}

/// `1/2 p_SA p_SB eta_dc^2 exp(-L0 / L_att)` for channel `i`.
pub fn link_success_single<T: Real>(lp: &LinkParams<T>, i: usize) -> T {
    lit::<T>(BSM_EFFICIENCY) * lp.p_s_a[i] * lp.p_s_b[i] * lp.eta_dc * lp.eta_dc * lp.fiber()
}

/// Mean per-channel link probability.
pub fn mean_channel_success<T: Real>(lp: &LinkParams<T>) -> T {
    (0..lp.m()).fold(T::zero(), |a, i| a + link_success_single(lp, i)) / lit(lp.m() as f64)
}

/// Largest `|p_i - mean| / mean` over channels.
pub fn channel_spread<T: Real>(lp: &LinkParams<T>) -> T {
    let mean = mean_channel_success(lp);
    if mean == T::zero() {
        return T::zero();
    }
    (0..lp.m()).fold(T::zero(), |w, i| {
        let d = (link_success_single(lp, i) - mean).abs() / mean;
        if d > w {
            d
        } else {
            w
        }
    })
}

/// `1 - (1 - p)^m` with `p` the mean channel probability.
pub fn link_success_multiplexed<T: Real>(lp: &LinkParams<T>) -> T {
    let spread = to_f64(channel_spread(lp));
    if spread > CHANNEL_SPREAD_LIMIT {
        log::warn!("channel link probabilities differ by {:.1}%; uniform formula is approximate", spread * 100.0);
    }
    multiplexed_from_single(mean_channel_success(lp), lp.m())
}

pub fn multiplexed_from_single<T: Real>(p: T, m: usize) -> T {
    if p >= T::one() {
        return T::one();
    }
    // -expm1(m ln(1 - p)) keeps full precision when p is tiny.
    -(lit::<T>(m as f64) * (-p).ln_1p()).exp_m1()
}

/// Channels tried in priority order: `1 - prod (1 - p_i)`.
pub fn link_success_priority<T: Real>(lp: &LinkParams<T>) -> T {
    T::one() - (0..lp.m()).fold(T::one(), |a, i| a * (T::one() - link_success_single(lp, i)))
}

/// Swap success `1/2 gamma_A gamma_B eta_A eta_B`.
pub fn swap_success_probability<T: Real>(gamma_a: T, gamma_b: T, eta_a: T, eta_b: T) -> T {
    lit::<T>(BSM_EFFICIENCY) * gamma_a * gamma_b * eta_a * eta_b
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ceiling_and_attenuation() {
        let lp = LinkParams::uniform(0.0, 1.0, 1, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(link_success_single(&lp, 0), 0.5, epsilon = 1e-15);
        let lp = LinkParams::uniform(22.0, 1.0, 1, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(link_success_single(&lp, 0), 0.5 / std::f64::consts::E, epsilon = 1e-15);
    }

    #[test]
    fn conversion_loss() {
        let a = LinkParams::uniform(10.0, 1.0, 1, 0.01, 0.01).unwrap();
        let b = LinkParams { eta_dc: 0.136, ..a.clone() };
        let r = link_success_single(&b, 0) / link_success_single(&a, 0);
        assert_abs_diff_eq!(r, 0.136 * 0.136, epsilon = 1e-15);
        assert_abs_diff_eq!(r, 0.0185, epsilon = 5e-5);
    }

    #[test]
    fn multiplexed_arithmetic() {
        assert_abs_diff_eq!(multiplexed_from_single(0.01, 6), 1.0 - 0.99f64.powi(6), epsilon = 1e-15);
        assert_abs_diff_eq!(multiplexed_from_single(0.01, 6), 0.05852, epsilon = 1e-5);
        let lp = LinkParams::uniform(10.0, 0.5, 1, 0.02, 0.03).unwrap();
        assert_abs_diff_eq!(link_success_multiplexed(&lp), link_success_single(&lp, 0), epsilon = 1e-19);
    }

    #[test]
    fn priority_form_matches_uniform_form() {
        let lp = LinkParams::uniform(20.0, 0.4, 6, 0.02, 0.02).unwrap();
        assert_abs_diff_eq!(link_success_priority(&lp), link_success_multiplexed(&lp), epsilon = 1e-15);
    }

    #[test]
    fn default_swap_probability() {
        assert_abs_diff_eq!(swap_success_probability(0.157, 0.157, 0.29, 0.29), 0.00103649, epsilon = 1e-8);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(LinkParams::uniform(10.0, 0.0, 2, 0.1, 0.1).is_err());
        assert!(LinkParams::uniform(-1.0, 0.5, 2, 0.1, 0.1).is_err());
        assert!(LinkParams::uniform(1.0, 0.5, 0, 0.1, 0.1).is_err());
    }
}
