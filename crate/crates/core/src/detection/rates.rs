use serde::Serialize;

use super::table::{prob_table, ProbRow};
use super::{DetectionError, SourceParams};
use crate::quantum::PolarizationBasis;
use crate::scalar::{lit, Real};

/// Stokes rate `R`, correlated coincidence rate `C` and anti-correlated
/// coincidence rate `N`, all per second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates<T> {
    pub stokes: T,
    pub coincidence: T,
    pub cross: T,
}

impl<T: Real> Rates<T> {
    pub fn from_row(row: &ProbRow<T>, rate: T) -> Self {
        Self { stokes: rate * row.p_s(), coincidence: rate * row.correlated(), cross: rate * row.anticorrelated() }
    }

    pub fn visibility(&self) -> Result<T, DetectionError> {
        super::table::visibility_of(self.coincidence, self.cross)
    }

    pub(crate) fn add(self, o: Self) -> Self {
        Self {
            stokes: self.stokes + o.stokes,
            coincidence: self.coincidence + o.coincidence,
            cross: self.cross + o.cross,
        }
    }

    pub(crate) fn zero() -> Self {
        Self { stokes: T::zero(), coincidence: T::zero(), cross: T::zero() }
    }
}

pub fn single_source_rates<T: Real>(
    p: &SourceParams<T>,
    rate: T,
    basis: PolarizationBasis,
) -> Result<Rates<T>, DetectionError> {
    Ok(Rates::from_row(&prob_table(p, basis)?, rate))
}

pub fn single_source_visibility<T: Real>(p: &SourceParams<T>, basis: PolarizationBasis) -> Result<T, DetectionError> {
    prob_table(p, basis)?.visibility()
}

/// Linearized visibility `V ~ (1 - z) - k * chi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityFit<T> {
    pub z: T,
    pub k: T,
}

impl<T: Real> VisibilityFit<T> {
    pub fn visibility(&self, chi: T) -> T {
        T::one() - self.z - self.k * chi
    }
}

/// Intercept deficit and slope of the small-`chi` visibility.
pub fn visibility_fit<T: Real>(p: &SourceParams<T>, basis: PolarizationBasis) -> VisibilityFit<T> {
    let n = p.noise.get(basis);
    let two: T = lit(2.0);
    let bg = n.g_s + n.g_t / p.gamma;
    let xt = two * (n.a + n.b);
    match basis {
        PolarizationBasis::HV => VisibilityFit { z: xt + two * bg, k: T::one() - xt },
        PolarizationBasis::DA | PolarizationBasis::RL => {
            let d2 = p.delta().powi(2);
            VisibilityFit { z: d2 + xt + two * bg, k: T::one() - d2 - xt - lit::<T>(4.0) * bg }
        }
    }
}
