use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// Straight-line visibility law in the interface Stokes probability,
/// `V = v0 + slope * p_S`, with an optional storage-time penalty.
///
/// The penalty models background on the retrieved-photon side growing in
/// relative weight as retrieval efficiency decays:
/// `-2 g_t (1 / gamma - 1 / gamma_ref)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearVisibilityLaw<T> {
    pub v0: T,
    /// Change of visibility per unit Stokes probability (negative).
    pub slope: T,
    pub m: usize,
    pub eta_s_mean: T,
    pub g_t: T,
    pub gamma_ref: T,
}

impl<T: Real> LinearVisibilityLaw<T> {
    pub fn new(v0: T, slope: T, m: usize, eta_s_mean: T) -> Self {
        Self { v0, slope, m, eta_s_mean, g_t: T::zero(), gamma_ref: T::one() }
    }

    pub fn with_decay(mut self, g_t: T, gamma_ref: T) -> Self {
        self.g_t = g_t;
        self.gamma_ref = gamma_ref;
        self
    }

    pub fn z_bar(&self) -> T {
        T::one() - self.v0
    }

    /// Slope against the mean excitation probability.
    pub fn k_bar(&self) -> T {
        -self.slope * lit(self.m as f64) * self.eta_s_mean
    }

    pub fn chi_bar(&self, p_s: T) -> T {
        p_s / (lit::<T>(self.m as f64) * self.eta_s_mean)
    }

    pub fn visibility_at_ps(&self, p_s: T) -> T {
        self.v0 + self.slope * p_s
    }

    /// Visibility at mean excitation `chi` with retrieval efficiency `gamma`.
    pub fn visibility(&self, chi: T, gamma: T) -> T {
        let two: T = lit(2.0);
        T::one() - self.z_bar() - self.k_bar() * chi - two * self.g_t * (T::one() / gamma - T::one() / self.gamma_ref)
    }

    pub fn chsh(&self, chi: T, gamma: T) -> T {
        lit::<T>(2.0) * T::SQRT_2() * self.visibility(chi, gamma)
    }

    pub fn fidelity(&self, chi: T, gamma: T) -> T {
        werner_fidelity(self.visibility(chi, gamma))
    }
}

/// `(3V + 1) / 4`.
pub fn werner_fidelity<T: Real>(v: T) -> T {
    (lit::<T>(3.0) * v + T::one()) / lit(4.0)
}

/// `V = S / (2 sqrt 2)`.
pub fn visibility_from_chsh<T: Real>(s: T) -> T {
    s / (lit::<T>(2.0) * T::SQRT_2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn chi_and_ps_forms_agree() {
        let law = LinearVisibilityLaw::new(0.91, -2.35, 6, 0.29);
        let p = 0.042;
        assert_abs_diff_eq!(law.visibility(law.chi_bar(p), 1.0), law.visibility_at_ps(p), epsilon = 1e-14);
    }

    #[test]
    fn decay_penalty_vanishes_at_reference() {
        let law = LinearVisibilityLaw::new(0.91, -2.35, 6, 0.29).with_decay(0.005, 0.157);
        assert_abs_diff_eq!(law.visibility(0.007, 0.157), law.visibility_at_ps(0.007 * 6.0 * 0.29), epsilon = 1e-14);
        assert!(law.visibility(0.007, 0.0875) < law.visibility(0.007, 0.157));
    }
}
