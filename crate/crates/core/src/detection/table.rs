use serde::Serialize;

use super::{DetectionError, SourceParams};
use crate::quantum::PolarizationBasis;
use crate::scalar::{lit, to_f64, Real};

/// Per-trial click probabilities of one source in one basis.
///
/// `x` is detector 1 and `y` detector 2 on each side (H/V, D/A, R/L). Joints
/// are named Stokes-first: `xy` is Stokes on 1, anti-Stokes on 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbRow<T> {
    pub basis: PolarizationBasis,
    pub s_x: T,
    pub s_y: T,
    pub t_x: T,
    pub t_y: T,
    pub xx: T,
    pub yy: T,
    pub xy: T,
    pub yx: T,
}

impl<T: Real> ProbRow<T> {
    pub fn p_s(&self) -> T {
        self.s_x + self.s_y
    }

    pub fn p_t(&self) -> T {
        self.t_x + self.t_y
    }

    /// Coincidences the ideal state produces: parallel pairs, or anti-parallel
    /// ones in the circular basis.
    pub fn correlated(&self) -> T {
        if self.basis.parallel_is_correlated() {
            self.xx + self.yy
        } else {
            self.xy + self.yx
        }
    }

    pub fn anticorrelated(&self) -> T {
        if self.basis.parallel_is_correlated() {
            self.xy + self.yx
        } else {
            self.xx + self.yy
        }
    }

    pub fn total_joint(&self) -> T {
        self.xx + self.yy + self.xy + self.yx
    }

    /// Joints as `[stokes][anti_stokes]`.
    pub fn joints(&self) -> [[T; 2]; 2] {
        [[self.xx, self.xy], [self.yx, self.yy]]
    }

    /// `|C - N| / (C + N)`.
    pub fn visibility(&self) -> Result<T, DetectionError> {
        visibility_of(self.correlated(), self.anticorrelated())
    }

    /// Singles scaled by `singles`, joints by `joints`.
    pub fn scaled(&self, singles: T, joints: T) -> Self {
        Self {
            basis: self.basis,
            s_x: self.s_x * singles,
            s_y: self.s_y * singles,
            t_x: self.t_x * singles,
            t_y: self.t_y * singles,
            xx: self.xx * joints,
            yy: self.yy * joints,
            xy: self.xy * joints,
            yx: self.yx * joints,
        }
    }

    fn fields_mut(&mut self) -> [(&'static str, &mut T); 8] {
        [
            ("p_sx", &mut self.s_x),
            ("p_sy", &mut self.s_y),
            ("p_tx", &mut self.t_x),
            ("p_ty", &mut self.t_y),
            ("p_sx_tx", &mut self.xx),
            ("p_sy_ty", &mut self.yy),
            ("p_sx_ty", &mut self.xy),
            ("p_sy_tx", &mut self.yx),
        ]
    }
}

pub(crate) fn visibility_of<T: Real>(c: T, n: T) -> Result<T, DetectionError> {
    let total = c + n;
    if !(total > T::zero()) {
        return Err(DetectionError::UndefinedVisibility);
    }
    Ok((c - n).abs() / total)
}

const CLAMP_SLACK: f64 = 1e-9;

fn clamp_checked<T: Real>(row: &mut ProbRow<T>) -> Result<(), DetectionError> {
    let slack: T = lit(CLAMP_SLACK);
    for (name, v) in row.fields_mut() {
        if *v < -slack || *v > T::one() + slack || !v.is_finite() {
            return Err(DetectionError::OutOfRegime { quantity: name, value: to_f64(*v) });
        }
        *v = crate::scalar::clamp(*v, T::zero(), T::one());
    }
    Ok(())
}

/// First-order click probabilities of a single source, including accidental
/// `p_S * p_T` terms in every joint.
pub fn prob_table<T: Real>(p: &SourceParams<T>, basis: PolarizationBasis) -> Result<ProbRow<T>, DetectionError> {
    let n = *p.noise.get(basis);
    let (a, b) = (n.a, n.b);
    let (chi, g, es, et) = (p.chi, p.gamma, p.eta_s, p.eta_t);
    let pair = chi * g * es * et;
    let bg_s = n.g_s * es;
    let bg_t = n.g_t * et;
    let quarter: T = lit(0.25);
    let mut row = match basis {
        PolarizationBasis::HV => {
            let c2 = p.theta.cos().powi(2);
            let s2 = p.theta.sin().powi(2);
            let s_x = chi * c2 * (T::one() - a) * es + bg_s + a * chi * s2 * es;
            let s_y = chi * s2 * (T::one() - a) * es + bg_s + a * chi * c2 * es;
            let t_x = chi * c2 * (T::one() - b) * g * et + bg_t + b * chi * s2 * g * et;
            let t_y = chi * s2 * (T::one() - b) * g * et + bg_t + b * chi * c2 * g * et;
            ProbRow {
                basis,
                s_x,
                s_y,
                t_x,
                t_y,
                xx: pair * c2 * (T::one() - a - b) + s_x * t_x,
                yy: pair * s2 * (T::one() - a - b) + s_y * t_y,
                xy: (a + b) * pair * c2 + s_x * t_y,
                yx: (a + b) * pair * s2 + s_y * t_x,
            }
        }
        PolarizationBasis::DA | PolarizationBasis::RL => {
            let half: T = lit(0.5);
            let s = chi * es * half + bg_s;
            let t = chi * g * et * half + bg_t;
            let big = p.sigma().powi(2);
            let small = p.delta().powi(2);
            let signal = quarter * big * pair * (T::one() - a - b) + s * t;
            let leak = quarter * small * pair + quarter * (a + b) * big * pair + s * t;
            let (par, anti) = if basis.parallel_is_correlated() { (signal, leak) } else { (leak, signal) };
            ProbRow { basis, s_x: s, s_y: s, t_x: t, t_y: t, xx: par, yy: par, xy: anti, yx: anti }
        }
    };
    clamp_checked(&mut row)?;
    Ok(row)
}
