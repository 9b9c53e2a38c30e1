use serde::Serialize;

use super::multiplex::{bisect, composite_visibility, multiplexed_rates};
use super::rates::{single_source_rates, single_source_visibility, Rates};
use super::{DetectionError, InterfaceParams, SourceParams};
use crate::quantum::PolarizationBasis;
use crate::scalar::{lit, Real};

/// Multiplexed-over-single rate ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Enhancement<T> {
    pub stokes: T,
    pub coincidence: T,
    pub chi_single: T,
    pub chi_multiplexed: T,
}

/// Rates averaged over running each source alone at `chi`.
pub fn mean_single_rates<T: Real>(ip: &InterfaceParams<T>, basis: PolarizationBasis, chi: T) -> Result<Rates<T>, DetectionError> {
    let mut acc = Rates::zero();
    for s in &ip.sources {
        acc = acc.add(single_source_rates(&s.with_chi(chi), ip.rate, basis)?);
    }
    let m: T = lit(ip.m() as f64);
    Ok(Rates { stokes: acc.stokes / m, coincidence: acc.coincidence / m, cross: acc.cross / m })
}

/// Average single-source visibility at `chi`.
pub fn mean_single_visibility<T: Real>(sources: &[SourceParams<T>], basis: PolarizationBasis, chi: T) -> Result<T, DetectionError> {
    let mut acc = T::zero();
    for s in sources {
        acc += single_source_visibility(&s.with_chi(chi), basis)?;
    }
    Ok(acc / lit(sources.len() as f64))
}

/// Ratios in the weak-excitation limit, where depletion and accidentals
/// vanish: `sum eta_S / mean eta_S` for Stokes and the router-weighted pair
/// yield for coincidences.
pub fn enhancement_limit<T: Real>(ip: &InterfaceParams<T>, basis: PolarizationBasis) -> Enhancement<T> {
    let m: T = lit(ip.m() as f64);
    let pair = |s: &SourceParams<T>| {
        let k = match basis {
            PolarizationBasis::HV => T::one(),
            _ => s.sigma().powi(2) * lit(0.5),
        };
        s.gamma * s.eta_s * s.eta_t * k
    };
    let sum_es = ip.sources.iter().fold(T::zero(), |a, s| a + s.eta_s);
    let sum_pair = ip.sources.iter().fold(T::zero(), |a, s| a + pair(s));
    let routed = ip.sources.iter().enumerate().fold(T::zero(), |a, (i, s)| a + ip.routed_eta(i) * pair(s));
    Enhancement {
        stokes: sum_es / (sum_es / m),
        coincidence: routed / (sum_pair / m),
        chi_single: T::zero(),
        chi_multiplexed: T::zero(),
    }
}

/// Ratios at a common excitation probability.
pub fn enhancement_at_chi<T: Real>(ip: &InterfaceParams<T>, basis: PolarizationBasis, chi: T) -> Result<Enhancement<T>, DetectionError> {
    let single = mean_single_rates(ip, basis, chi)?;
    let mux = multiplexed_rates(&ip.clone().with_common_chi(chi), basis)?;
    Ok(Enhancement {
        stokes: mux.stokes / single.stokes,
        coincidence: mux.coincidence / single.coincidence,
        chi_single: chi,
        chi_multiplexed: chi,
    })
}

/// Ratios at equal visibility: each configuration runs at the excitation
/// probability that brings its visibility down to `target`.
pub fn fixed_visibility_enhancement<T: Real>(
    ip: &InterfaceParams<T>,
    basis: PolarizationBasis,
    target: T,
) -> Result<Enhancement<T>, DetectionError> {
    let lo: T = lit(1e-12);
    let hi: T = lit::<T>(super::params::FIRST_ORDER_LIMIT) / lit::<T>(ip.m() as f64);
    let no_solution = |e: DetectionError| match e {
        DetectionError::NoSolution { .. } => DetectionError::NoSolution { target: crate::scalar::to_f64(target) },
        other => other,
    };
    let chi_s = bisect(lo, hi, |chi| Ok(target - mean_single_visibility(&ip.sources, basis, chi)?)).map_err(no_solution)?;
    let chi_m = bisect(lo, hi, |chi| Ok(target - composite_visibility(&ip.clone().with_common_chi(chi), basis)?))
        .map_err(no_solution)?;
    let single = mean_single_rates(ip, basis, chi_s)?;
    let mux = multiplexed_rates(&ip.clone().with_common_chi(chi_m), basis)?;
    Ok(Enhancement {
        stokes: mux.stokes / single.stokes,
        coincidence: mux.coincidence / single.coincidence,
        chi_single: chi_s,
        chi_multiplexed: chi_m,
    })
}
