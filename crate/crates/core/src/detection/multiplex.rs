use super::rates::Rates;
use super::table::{prob_table, visibility_of, ProbRow};
use super::{Depletion, DetectionError, InterfaceParams};
use crate::quantum::PolarizationBasis;
use crate::scalar::{lit, Real};

/// Weight each source carries for not being pre-empted by higher-priority
/// sources in the same trial.
pub fn depletion_factors<T: Real>(p_s: &[T], mode: Depletion) -> Vec<T> {
    let mut out = Vec::with_capacity(p_s.len());
    match mode {
        Depletion::MeanField => {
            let mean = p_s.iter().fold(T::zero(), |a, &b| a + b) / lit(p_s.len().max(1) as f64);
            let q = T::one() - mean;
            let mut f = T::one();
            for _ in p_s {
                out.push(f);
                f *= q;
            }
        }
        Depletion::ExactPriority => {
            let mut f = T::one();
            for &p in p_s {
                out.push(f);
                f *= T::one() - p;
            }
        }
    }
    out
}

/// Non-multiplexed rows for every source.
pub fn source_rows<T: Real>(ip: &InterfaceParams<T>, basis: PolarizationBasis) -> Result<Vec<ProbRow<T>>, DetectionError> {
    ip.sources.iter().map(|s| prob_table(s, basis)).collect()
}

/// Rows as seen through the feed-forward interface: singles carry the
/// depletion factor, joints also the router transmission.
pub fn multiplexed_prob_table<T: Real>(
    ip: &InterfaceParams<T>,
    basis: PolarizationBasis,
) -> Result<Vec<ProbRow<T>>, DetectionError> {
    let rows = source_rows(ip, basis)?;
    let p_s: Vec<T> = rows.iter().map(|r| r.p_s()).collect();
    let d = depletion_factors(&p_s, ip.depletion);
    Ok(rows.iter().enumerate().map(|(i, r)| r.scaled(d[i], d[i] * ip.routed_eta(i))).collect())
}

/// Total Stokes click probability per write trial through the interface.
pub fn interface_stokes_probability<T: Real>(ip: &InterfaceParams<T>, basis: PolarizationBasis) -> Result<T, DetectionError> {
    Ok(multiplexed_prob_table(ip, basis)?.iter().fold(T::zero(), |a, r| a + r.p_s()))
}

pub fn multiplexed_rates<T: Real>(ip: &InterfaceParams<T>, basis: PolarizationBasis) -> Result<Rates<T>, DetectionError> {
    Ok(multiplexed_prob_table(ip, basis)?
        .iter()
        .fold(Rates::zero(), |acc, r| acc.add(Rates::from_row(r, ip.rate))))
}

/// Coincidence-weighted mean of per-source visibilities.
pub fn composite_visibility_weighted<T: Real>(rows: &[ProbRow<T>]) -> Result<T, DetectionError> {
    let total = rows.iter().fold(T::zero(), |a, r| a + r.correlated() + r.anticorrelated());
    if !(total > T::zero()) {
        return Err(DetectionError::UndefinedVisibility);
    }
    let mut acc = T::zero();
    for r in rows {
        let w = r.correlated() + r.anticorrelated();
        if w > T::zero() {
            acc += (w / total) * r.visibility()?;
        }
    }
    Ok(acc)
}

/// Visibility of the pooled coincidence counts.
pub fn composite_visibility_pooled<T: Real>(rows: &[ProbRow<T>]) -> Result<T, DetectionError> {
    let c = rows.iter().fold(T::zero(), |a, r| a + r.correlated());
    let n = rows.iter().fold(T::zero(), |a, r| a + r.anticorrelated());
    visibility_of(c, n)
}

/// Composite visibility of the interface (weighted form).
pub fn composite_visibility<T: Real>(ip: &InterfaceParams<T>, basis: PolarizationBasis) -> Result<T, DetectionError> {
    composite_visibility_weighted(&multiplexed_prob_table(ip, basis)?)
}

/// Common excitation probability giving a target interface Stokes
/// probability per trial, found by bisection.
pub fn solve_common_chi<T: Real>(
    ip: &InterfaceParams<T>,
    basis: PolarizationBasis,
    target_p_s: T,
) -> Result<T, DetectionError> {
    let f = |chi: T| interface_stokes_probability(&ip.clone().with_common_chi(chi), basis);
    let lo_val = f(T::zero())?;
    if target_p_s < lo_val {
        return Err(DetectionError::NoSolution { target: crate::scalar::to_f64(target_p_s) });
    }
    bisect(T::zero(), T::one(), |chi| Ok(f(chi)? - target_p_s))
}

/// Root of an increasing function on `[lo, hi]`.
pub(crate) fn bisect<T: Real>(
    mut lo: T,
    mut hi: T,
    f: impl Fn(T) -> Result<T, DetectionError>,
) -> Result<T, DetectionError> {
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo > T::zero() || fhi < T::zero() {
        return Err(DetectionError::NoSolution { target: 0.0 });
    }
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{single_source_rates, Routing, SourceParams};
    use approx::assert_abs_diff_eq;

    fn six(chi: f64) -> InterfaceParams<f64> {
        let eta_rc = [0.689, 0.672, 0.705, 0.689, 0.680, 0.664];
        let sources = eta_rc
            .iter()
            .map(|&e| SourceParams { eta_rc: e, ..SourceParams::ideal(chi, 0.636, 0.157, 0.29, 0.29) })
            .collect();
        InterfaceParams::new(sources, 6.7e5).unwrap()
    }

    #[test]
    fn mean_field_factor() {
        let d = depletion_factors(&[0.002; 6], Depletion::MeanField);
        assert_abs_diff_eq!(d[5], 0.998f64.powi(5), epsilon = 1e-15);
        assert_abs_diff_eq!(d[5], 0.99004, epsilon = 1e-5);
        let e = depletion_factors(&[0.1, 0.2, 0.3], Depletion::ExactPriority);
        assert_abs_diff_eq!(e[2], 0.9 * 0.8, epsilon = 1e-15);
    }

    #[test]
    fn single_source_interface_matches_plain_rates() {
        let s = SourceParams::ideal(0.01, 0.636, 0.157, 0.29, 0.29);
        let ip = InterfaceParams::single(s, 6.7e5).unwrap();
        assert_eq!(multiplexed_rates(&ip, PolarizationBasis::DA).unwrap(), single_source_rates(&s, 6.7e5, PolarizationBasis::DA).unwrap());
    }

    #[test]
    fn joints_carry_router_transmission() {
        let ip = six(1e-9);
        let rows = multiplexed_prob_table(&ip, PolarizationBasis::HV).unwrap();
        let raw = prob_table(&ip.sources[0], PolarizationBasis::HV).unwrap();
        assert_abs_diff_eq!(rows[0].xx / raw.xx, 0.689, epsilon = 1e-12);
        let direct = multiplexed_prob_table(&ip.clone().with_routing(Routing::Direct), PolarizationBasis::HV).unwrap();
        assert_abs_diff_eq!(direct[0].xx, raw.xx, epsilon = 1e-24);
    }

    #[test]
    fn weighted_mean_example() {
        let mk = |c: f64, n: f64| ProbRow { basis: PolarizationBasis::HV, s_x: 0.0, s_y: 0.0, t_x: 0.0, t_y: 0.0, xx: c, yy: 0.0, xy: n, yx: 0.0 };
        let rows = [mk(0.75, 0.0), mk(0.225, 0.025)];
        assert_abs_diff_eq!(composite_visibility_weighted(&rows).unwrap(), 0.95, epsilon = 1e-15);
        assert_abs_diff_eq!(composite_visibility_pooled(&rows).unwrap(), 0.95, epsilon = 1e-15);
    }

    #[test]
    fn chi_for_operating_point() {
        let ip = six(0.0);
        let chi = solve_common_chi(&ip, PolarizationBasis::HV, 0.0126).unwrap();
        let p = interface_stokes_probability(&ip.with_common_chi(chi), PolarizationBasis::HV).unwrap();
        assert_abs_diff_eq!(p, 0.0126, epsilon = 1e-12);
        // Linear estimate ignores depletion, which costs about 0.5 percent here.
        assert!((chi / (0.0126 / (6.0 * 0.29)) - 1.0).abs() < 0.01);
    }
}
