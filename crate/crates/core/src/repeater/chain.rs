use serde::{Deserialize, Serialize};

use super::RepeaterError;
use crate::scalar::{lit, to_f64, Real};

/// Speed of light in fiber, km/s.
pub const FIBER_LIGHT_SPEED_KM_S: f64 = 2.0e5;

/// Nested swapping chain over total distance `l_km`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainParams<T> {
    pub l_km: T,
    pub nesting: u32,
    pub c_km_s: T,
    /// Swap success per nesting level, `p_1 .. p_n`.
    pub swap_success: Vec<T>,
    /// Mean router transmission of the multiplexed interfaces.
    pub eta_rc_bar: T,
}

impl<T: Real> ChainParams<T> {
    pub fn new(l_km: T, nesting: u32, swap_success: Vec<T>, eta_rc_bar: T) -> Result<Self, RepeaterError> {
        let cp = Self { l_km, nesting, c_km_s: lit(FIBER_LIGHT_SPEED_KM_S), swap_success, eta_rc_bar };
        cp.validate()?;
        Ok(cp)
    }

    pub fn validate(&self) -> Result<(), RepeaterError> {
        if self.swap_success.len() != self.nesting as usize {
            return Err(RepeaterError::NestingMismatch { nesting: self.nesting, given: self.swap_success.len() });
        }
        let bad = |field: &'static str, v: T| Err(RepeaterError::InvalidParam { field, value: to_f64(v) });
        if !(self.l_km > T::zero()) {
            return bad("l_km", self.l_km);
        }
        if !(self.c_km_s > T::zero()) {
            return bad("c_km_s", self.c_km_s);
        }
        if !(self.eta_rc_bar >= T::zero() && self.eta_rc_bar <= T::one()) {
            return bad("eta_rc_bar", self.eta_rc_bar);
        }
        for &p in &self.swap_success {
            if !(p >= T::zero() && p <= T::one()) {
                return bad("swap_success", p);
            }
        }
        Ok(())
    }

    /// `L / 2^n`.
    pub fn elementary_length(&self) -> T {
        self.l_km / lit::<T>(2f64.powi(self.nesting as i32))
    }

    /// Checks `L = 2^n L0` to a relative 1e-9.
    pub fn check_elementary(&self, l0_km: T) -> Result<(), RepeaterError> {
        let want = self.elementary_length();
        if ((want - l0_km) / want).abs() > lit(1e-9) {
            return Err(RepeaterError::LengthMismatch { l0: to_f64(l0_km), expected: to_f64(want) });
        }
        Ok(())
    }
}

/// Average distribution time, or a marker that some step never succeeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TotalTime<T> {
    Finite(T),
    Unreachable,
}

impl<T: Real> TotalTime<T> {
    pub fn seconds(&self) -> Option<T> {
        match *self {
            TotalTime::Finite(t) => Some(t),
            TotalTime::Unreachable => None,
        }
    }

    /// `self / other`, if both are finite.
    pub fn ratio(&self, other: &Self) -> Option<T> {
        Some(self.seconds()? / other.seconds()?)
    }
}

/// `(L / c) (3/2)^n / (p_link p_1 .. p_n)`, with an extra `eta_rc^(2n)` in
/// the denominator when the retrieved photons pass the switch.
pub fn total_time<T: Real>(cp: &ChainParams<T>, p_link: T, multiplexed: bool) -> TotalTime<T> {
    let mut denom = p_link;
    for &p in &cp.swap_success {
        denom *= p;
    }
    if multiplexed {
        denom *= cp.eta_rc_bar.powi(2 * cp.nesting as i32);
    }
    if !(denom > T::zero()) {
        return TotalTime::Unreachable;
    }
    let t = cp.l_km / cp.c_km_s * lit::<T>(1.5).powi(cp.nesting as i32) / denom;
    if t.is_finite() {
        TotalTime::Finite(t)
    } else {
        TotalTime::Unreachable
    }
}

/// Time reduction from `m`-fold multiplexing in the weak-link limit where the
/// link probability grows `m`-fold: `m eta_rc^(2n)`. A single mode needs no
/// switch, so `m = 1` gives exactly 1.
pub fn speedup<T: Real>(cp: &ChainParams<T>, p_single: T, m: usize) -> Option<T> {
    total_time(cp, p_single, false).ratio(&total_time(cp, p_single * lit(m as f64), m > 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bare_link_time() {
        let cp = ChainParams::new(100.0, 0, vec![], 0.683).unwrap();
        assert_eq!(total_time(&cp, 1.0, false), TotalTime::Finite(100.0 / 2e5));
    }

    #[test]
    fn one_level_speedup() {
        let cp = ChainParams::new(200.0, 1, vec![0.00104], 0.683).unwrap();
        let s = speedup(&cp, 1e-5, 6).unwrap();
        assert_abs_diff_eq!(s, 6.0 * 0.683 * 0.683, epsilon = 1e-12);
        assert_abs_diff_eq!(s, 2.80, epsilon = 0.005);
        assert_eq!(speedup(&cp, 1e-5, 1).unwrap(), 1.0);
    }

    #[test]
    fn zero_probability_is_unreachable() {
        let cp = ChainParams::new(200.0, 1, vec![0.0], 0.683).unwrap();
        assert_eq!(total_time(&cp, 0.1, false), TotalTime::Unreachable);
        let cp = ChainParams::new(200.0, 1, vec![0.5], 0.683).unwrap();
        assert_eq!(total_time(&cp, 0.0, true), TotalTime::Unreachable);
        assert_eq!(total_time(&cp, 1e-320, true), TotalTime::Unreachable);
    }

    #[test]
    fn nesting_must_match() {
        assert!(matches!(ChainParams::new(200.0, 2, vec![0.5], 0.7), Err(RepeaterError::NestingMismatch { .. })));
        let cp = ChainParams::new(200.0, 2, vec![0.5, 0.5], 0.7).unwrap();
        assert!(cp.check_elementary(50.0).is_ok());
        assert!(cp.check_elementary(60.0).is_err());
    }
}
