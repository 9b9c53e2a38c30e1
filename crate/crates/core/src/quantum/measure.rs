use nalgebra::{Complex, Vector2, Vector4};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::state::{re, DensityMatrix};
use crate::scalar::{lit, Real};

/// The three mutually unbiased analysis bases used on both photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolarizationBasis {
    HV,
    DA,
    RL,
}

impl PolarizationBasis {
    pub const ALL: [PolarizationBasis; 3] = [Self::HV, Self::DA, Self::RL];

    pub fn analyzer<T: Real>(self) -> Analyzer<T> {
        match self {
            Self::HV => Analyzer::Linear(T::zero()),
            Self::DA => Analyzer::Linear(lit(45.0)),
            Self::RL => Analyzer::Circular,
        }
    }

    /// Whether the "correlated" coincidences of this basis pair detector 1
    /// with detector 1. For R-L the correlated pairs are anti-parallel.
    pub fn parallel_is_correlated(self) -> bool {
        !matches!(self, Self::RL)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::HV => "HV",
            Self::DA => "DA",
            Self::RL => "RL",
        }
    }
}

impl fmt::Display for PolarizationBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolarizationBasis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace(['-', '_'], "").as_str() {
            "HV" => Ok(Self::HV),
            "DA" => Ok(Self::DA),
            "RL" => Ok(Self::RL),
            other => Err(format!("unknown basis `{other}`")),
        }
    }
}

/// Polarization analyzer in front of a two-detector PBS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analyzer<T> {
    /// Linear analysis at the given angle in degrees: detector 1 transmits
    /// `theta`, detector 2 transmits `theta + 90`.
    Linear(T),
    /// Quarter-wave plate in front of the PBS: detector 1 sees R, detector 2 sees L.
    Circular,
}

impl<T: Real> Analyzer<T> {
    /// Projection vectors for detector 1 and detector 2.
    pub fn modes(&self) -> [Vector2<Complex<T>>; 2] {
        match *self {
            Analyzer::Linear(deg) => {
                let a = deg * T::PI() / lit(180.0);
                let (s, c) = (a.sin(), a.cos());
                [Vector2::new(re(c), re(s)), Vector2::new(re(-s), re(c))]
            }
            Analyzer::Circular => {
                let h = T::FRAC_1_SQRT_2();
                [
                    Vector2::new(re(h), Complex::new(T::zero(), h)),
                    Vector2::new(re(h), Complex::new(T::zero(), -h)),
                ]
            }
        }
    }
}

/// Analyzer pair: Stokes side and anti-Stokes side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSetting<T> {
    pub stokes: Analyzer<T>,
    pub anti_stokes: Analyzer<T>,
}

impl<T: Real> AnalyzerSetting<T> {
    /// Half-wave-plate angles in degrees; only meaningful modulo 180.
    pub fn linear(theta_s: T, theta_t: T) -> Self {
        Self { stokes: Analyzer::Linear(theta_s), anti_stokes: Analyzer::Linear(theta_t) }
    }

    pub fn basis(b: PolarizationBasis) -> Self {
        Self { stokes: b.analyzer(), anti_stokes: b.analyzer() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    One,
    Two,
}

impl Detector {
    fn idx(self) -> usize {
        match self {
            Detector::One => 0,
            Detector::Two => 1,
        }
    }
}

fn kron2<T: Real>(a: &Vector2<Complex<T>>, b: &Vector2<Complex<T>>) -> Vector4<Complex<T>> {
    Vector4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
}

/// Born-rule probability of the detector pair `(stokes, anti_stokes)` clicking.
pub fn coincidence_prob<T: Real>(
    rho: &DensityMatrix<T>,
    setting: &AnalyzerSetting<T>,
    outcome: (Detector, Detector),
) -> T {
    let s = setting.stokes.modes();
    let t = setting.anti_stokes.modes();
    let v = kron2(&s[outcome.0.idx()], &t[outcome.1.idx()]);
    (v.adjoint() * rho.matrix() * v)[(0, 0)].re
}

/// All four outcome probabilities, indexed `[stokes][anti_stokes]`.
pub fn coincidence_probs<T: Real>(rho: &DensityMatrix<T>, setting: &AnalyzerSetting<T>) -> [[T; 2]; 2] {
    use Detector::*;
    [
        [coincidence_prob(rho, setting, (One, One)), coincidence_prob(rho, setting, (One, Two))],
        [coincidence_prob(rho, setting, (Two, One)), coincidence_prob(rho, setting, (Two, Two))],
    ]
}

/// `E = p11 + p22 - p12 - p21`.
pub fn correlation<T: Real>(rho: &DensityMatrix<T>, setting: &AnalyzerSetting<T>) -> T {
    let p = coincidence_probs(rho, setting);
    p[0][0] + p[1][1] - p[0][1] - p[1][0]
}

/// Analyzer angles (degrees) of a CHSH test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshAngles<T> {
    pub s: T,
    pub s_prime: T,
    pub t: T,
    pub t_prime: T,
}

impl<T: Real> ChshAngles<T> {
    /// 0, 45 on the Stokes side; 22.5, 67.5 on the anti-Stokes side.
    pub fn canonical() -> Self {
        Self { s: T::zero(), s_prime: lit(45.0), t: lit(22.5), t_prime: lit(67.5) }
    }

    /// The four settings in the order (s,t), (s,t'), (s',t), (s',t').
    pub fn settings(&self) -> [AnalyzerSetting<T>; 4] {
        [
            AnalyzerSetting::linear(self.s, self.t),
            AnalyzerSetting::linear(self.s, self.t_prime),
            AnalyzerSetting::linear(self.s_prime, self.t),
            AnalyzerSetting::linear(self.s_prime, self.t_prime),
        ]
    }
}

/// `|E(s,t) - E(s,t') + E(s',t) + E(s',t')|`.
pub fn chsh<T: Real>(rho: &DensityMatrix<T>, angles: &ChshAngles<T>) -> T {
    let [a, b, c, d] = angles.settings().map(|st| correlation(rho, &st));
    (a - b + c + d).abs()
}
