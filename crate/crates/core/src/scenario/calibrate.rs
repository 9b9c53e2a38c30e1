use serde::Serialize;
use thiserror::Error;

use super::config::BasisTargets;
use crate::detection::bisect;
use crate::detection::{
    composite_visibility, solve_common_chi, visibility_from_chsh, werner_fidelity, DetectionError, InterfaceParams,
    LinearVisibilityLaw, NoiseModel,
};
use crate::quantum::PolarizationBasis;
use crate::sim::{decayed_interface, TimingConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("need at least two calibration points, got {0}")]
    TooFewPoints(usize),
    #[error("calibration points share one Stokes probability; slope is undefined")]
    Degenerate,
    #[error("no noise level reproduces the {basis} visibility {target}")]
    Unreachable { basis: PolarizationBasis, target: f64 },
    #[error(transparent)]
    Detection(#[from] DetectionError),
}

/// Straight-line fit of visibility against interface Stokes probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationResult {
    pub law: LinearVisibilityLaw<f64>,
    /// Model minus measured Bell parameter, per input point.
    pub residuals: Vec<f64>,
    /// Euclidean norm of `residuals`.
    pub residual_norm: f64,
    pub method: &'static str,
}

/// Least-squares fit of `V = S / 2 sqrt 2` to `(p_S, S)` points.
///
/// `m` and `eta_s_mean` only set the conversion of the slope to a slope in
/// mean excitation probability.
pub fn calibrate_linear(points: &[(f64, f64)], m: usize, eta_s_mean: f64) -> Result<CalibrationResult, CalibrationError> {
    if points.len() < 2 {
        return Err(CalibrationError::TooFewPoints(points.len()));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let vs: Vec<f64> = points.iter().map(|p| visibility_from_chsh(p.1)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let mv = vs.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * mx.abs().max(1.0) {
        return Err(CalibrationError::Degenerate);
    }
    let sxv: f64 = xs.iter().zip(&vs).map(|(x, v)| (x - mx) * (v - mv)).sum();
    let slope = sxv / sxx;
    let law = LinearVisibilityLaw::new(mv - slope * mx, slope, m, eta_s_mean);
    let residuals: Vec<f64> = points.iter().map(|&(p, s)| 2.0 * std::f64::consts::SQRT_2 * law.visibility_at_ps(p) - s).collect();
    let residual_norm = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
    Ok(CalibrationResult { law, residuals, residual_norm, method: "least_squares_linear" })
}

/// Forward model of a fitted law at one Stokes probability: `(S, F)`.
pub fn law_prediction(law: &LinearVisibilityLaw<f64>, p_s: f64) -> (f64, f64) {
    let v = law.visibility_at_ps(p_s);
    (2.0 * std::f64::consts::SQRT_2 * v, werner_fidelity(v))
}

/// Per-basis noise reproducing three measured composite visibilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseCalibration {
    /// Common excitation probability at the calibration point.
    pub chi: f64,
    pub noise: NoiseModel<f64>,
    /// Model visibilities with `noise`, in HV, DA, RL order.
    pub visibilities: [f64; 3],
    pub targets: [f64; 3],
    pub method: &'static str,
}

impl NoiseCalibration {
    pub fn residuals(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.visibilities[k] - self.targets[k])
    }
}

const MAX_BACKGROUND: f64 = 0.1;
const MAX_CROSSTALK: f64 = 0.25;

/// Splits the noise per basis from visibilities measured at interface Stokes
/// probability `p_s`.
///
/// A retrieved-side background common to all bases is fixed by the HV
/// visibility with no crosstalk. Equal crosstalk `a = b` on top of it then
/// matches DA and RL. Stokes-side background is left at zero.
pub fn calibrate_basis_noise(
    ip: &InterfaceParams<f64>,
    timing: &TimingConfig,
    targets: &BasisTargets,
    p_s: f64,
) -> Result<NoiseCalibration, CalibrationError> {
    let mut base = ip.clone();
    for s in &mut base.sources {
        s.noise = NoiseModel::default();
    }
    let base = decayed_interface(&base, timing);
    let chi = solve_common_chi(&base, PolarizationBasis::HV, p_s)?;
    let base = base.with_common_chi(chi);
    let with_noise = |noise: NoiseModel<f64>| {
        let mut ip = base.clone();
        for s in &mut ip.sources {
            s.noise = noise;
        }
        ip
    };
    let unreachable = |basis: PolarizationBasis| {
        let target = targets.get(basis);
        move |e: DetectionError| match e {
            DetectionError::NoSolution { .. } => CalibrationError::Unreachable { basis, target },
            other => other.into(),
        }
    };

    let hv = PolarizationBasis::HV;
    let g_t = bisect(0.0, MAX_BACKGROUND, |g| {
        let mut n = NoiseModel::default();
        n.hv.g_t = g;
        Ok(targets.hv - composite_visibility(&with_noise(n), hv)?)
    })
    .map_err(unreachable(hv))?;
    let mut noise = NoiseModel::default();
    for b in PolarizationBasis::ALL {
        noise.get_mut(b).g_t = g_t;
    }
    for b in [PolarizationBasis::DA, PolarizationBasis::RL] {
        let x = bisect(0.0, MAX_CROSSTALK, |x| {
            let mut n = noise;
            n.get_mut(b).a = x;
            n.get_mut(b).b = x;
            Ok(targets.get(b) - composite_visibility(&with_noise(n), b)?)
        })
        .map_err(unreachable(b))?;
        noise.get_mut(b).a = x;
        noise.get_mut(b).b = x;
    }
    let fitted = with_noise(noise);
    let mut visibilities = [0.0; 3];
    for (k, b) in PolarizationBasis::ALL.into_iter().enumerate() {
        visibilities[k] = composite_visibility(&fitted, b)?;
    }
    Ok(NoiseCalibration {
        chi,
        noise,
        visibilities,
        targets: PolarizationBasis::ALL.map(|b| targets.get(b)),
        method: "shared_background_then_crosstalk",
    })
}
