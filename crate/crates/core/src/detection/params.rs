use serde::{Deserialize, Serialize};

use super::DetectionError;
use crate::quantum::PolarizationBasis;
use crate::scalar::{lit, to_f64, Real};

/// Crosstalk and background for one analysis basis.
///
/// `a` and `b` mix the two polarization channels on the Stokes and anti-Stokes
/// side. `g_s` and `g_t` are flat background click probabilities per trial
/// and per channel, before detection efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct BasisNoise<T> {
    pub a: T,
    pub b: T,
    pub g_s: T,
    pub g_t: T,
}

impl<T: Real> Default for BasisNoise<T> {
    fn default() -> Self {
        Self { a: T::zero(), b: T::zero(), g_s: T::zero(), g_t: T::zero() }
    }
}

impl<T: Real> BasisNoise<T> {
    pub fn crosstalk(a: T, b: T) -> Self {
        Self { a, b, ..Self::default() }
    }

    /// Same background on both sides.
    pub fn with_background(mut self, g: T) -> Self {
        self.g_s = g;
        self.g_t = g;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.a == T::zero() && self.b == T::zero() && self.g_s == T::zero() && self.g_t == T::zero()
    }
}

/// Noise for each of the three bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct NoiseModel<T> {
    pub hv: BasisNoise<T>,
    pub da: BasisNoise<T>,
    pub rl: BasisNoise<T>,
}

impl<T: Real> Default for NoiseModel<T> {
    fn default() -> Self {
        Self::uniform(BasisNoise::default())
    }
}

impl<T: Real> NoiseModel<T> {
    pub fn uniform(n: BasisNoise<T>) -> Self {
        Self { hv: n, da: n, rl: n }
    }

    pub fn get(&self, basis: PolarizationBasis) -> &BasisNoise<T> {
        match basis {
            PolarizationBasis::HV => &self.hv,
            PolarizationBasis::DA => &self.da,
            PolarizationBasis::RL => &self.rl,
        }
    }

    pub fn get_mut(&mut self, basis: PolarizationBasis) -> &mut BasisNoise<T> {
        match basis {
            PolarizationBasis::HV => &mut self.hv,
            PolarizationBasis::DA => &mut self.da,
            PolarizationBasis::RL => &mut self.rl,
        }
    }
}

/// Physics of one spin-wave-photon source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct SourceParams<T> {
    /// Excitation probability per write pulse.
    pub chi: T,
    /// Clebsch-Gordan angle, radians.
    pub theta: T,
    /// Retrieval efficiency.
    pub gamma: T,
    pub eta_s: T,
    pub eta_t: T,
    /// Router transmission seen by the retrieved photon.
    pub eta_rc: T,
    pub noise: NoiseModel<T>,
}

impl<T: Real> SourceParams<T> {
    /// Noise-free source with unit router transmission.
    pub fn ideal(chi: T, theta: T, gamma: T, eta_s: T, eta_t: T) -> Self {
        Self { chi, theta, gamma, eta_s, eta_t, eta_rc: T::one(), noise: NoiseModel::default() }
    }

    pub fn theta_deg(&self) -> T {
        self.theta * lit(180.0) / T::pi()
    }

    /// `cos(theta) - sin(theta)`.
    pub fn delta(&self) -> T {
        self.theta.cos() - self.theta.sin()
    }

    /// `cos(theta) + sin(theta)`.
    pub fn sigma(&self) -> T {
        self.theta.cos() + self.theta.sin()
    }

    pub fn with_chi(mut self, chi: T) -> Self {
        self.chi = chi;
        self
    }

    pub fn with_noise(mut self, noise: NoiseModel<T>) -> Self {
        self.noise = noise;
        self
    }

    pub fn validate(&self) -> Result<(), DetectionError> {
        let unit = [
            ("chi", self.chi),
            ("gamma", self.gamma),
            ("eta_s", self.eta_s),
            ("eta_t", self.eta_t),
            ("eta_rc", self.eta_rc),
        ];
        for (field, v) in unit {
            check_range(field, v, T::zero(), T::one(), true)?;
        }
        check_range("theta", self.theta, T::zero(), T::frac_pi_2(), true)?;
        for b in PolarizationBasis::ALL {
            let n = self.noise.get(b);
            check_range("a", n.a, T::zero(), lit(0.5), false)?;
            check_range("b", n.b, T::zero(), lit(0.5), false)?;
            check_range("g_s", n.g_s, T::zero(), T::one(), true)?;
            check_range("g_t", n.g_t, T::zero(), T::one(), true)?;
        }
        Ok(())
    }

    /// Field-wise average, used as the reference "typical" source.
    pub fn mean_of(sources: &[Self]) -> Option<Self> {
        let first = *sources.first()?;
        let n: T = lit(sources.len() as f64);
        let avg = |f: fn(&Self) -> T| sources.iter().map(f).fold(T::zero(), |a, b| a + b) / n;
        Some(Self {
            chi: avg(|s| s.chi),
            theta: avg(|s| s.theta),
            gamma: avg(|s| s.gamma),
            eta_s: avg(|s| s.eta_s),
            eta_t: avg(|s| s.eta_t),
            eta_rc: avg(|s| s.eta_rc),
            noise: first.noise,
        })
    }
}

fn check_range<T: Real>(field: &'static str, v: T, lo: T, hi: T, hi_inclusive: bool) -> Result<(), DetectionError> {
    let ok = v >= lo && if hi_inclusive { v <= hi } else { v < hi };
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(DetectionError::InvalidParam { field, value: to_f64(v) })
    }
}

/// How the retrieved photon reaches the analyzer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Routing {
    /// Straight to the detectors; router transmission is ignored.
    Direct,
    /// Through the switching network; joints pick up `eta_rc`.
    #[default]
    Switched,
}

/// Priority weighting applied to lower-ranked sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Depletion {
    /// `(1 - mean p_S)^(i-1)`.
    #[default]
    MeanField,
    /// `prod_{j<i} (1 - p_S_j)`: what a first-click-wins sampler realizes.
    ExactPriority,
}

/// Ordered list of sources sharing one feed-forward controller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct InterfaceParams<T> {
    pub sources: Vec<SourceParams<T>>,
    /// Write-trial repetition rate, 1/s.
    pub rate: T,
    pub routing: Routing,
    pub depletion: Depletion,
}

/// Above this `chi * m` the first-order formulas are not trusted.
pub const FIRST_ORDER_LIMIT: f64 = 0.3;

impl<T: Real> InterfaceParams<T> {
    pub fn new(sources: Vec<SourceParams<T>>, rate: T) -> Result<Self, DetectionError> {
        let ip = Self { sources, rate, routing: Routing::Switched, depletion: Depletion::MeanField };
        ip.validate()?;
        Ok(ip)
    }

    /// One source read out directly, without the switch.
    pub fn single(source: SourceParams<T>, rate: T) -> Result<Self, DetectionError> {
        Ok(Self::new(vec![source], rate)?.with_routing(Routing::Direct))
    }

    pub fn with_routing(mut self, routing: Routing) -> Self {
        self.routing = routing;
        self
    }

    pub fn with_depletion(mut self, depletion: Depletion) -> Self {
        self.depletion = depletion;
        self
    }

    /// Sets every source to the same excitation probability.
    pub fn with_common_chi(mut self, chi: T) -> Self {
        for s in &mut self.sources {
            s.chi = chi;
        }
        self
    }

    pub fn m(&self) -> usize {
        self.sources.len()
    }

    pub fn validate(&self) -> Result<(), DetectionError> {
        if self.sources.is_empty() {
            return Err(DetectionError::EmptyInterface);
        }
        if !(self.rate > T::zero()) || !self.rate.is_finite() {
            return Err(DetectionError::InvalidParam { field: "rate", value: to_f64(self.rate) });
        }
        for s in &self.sources {
            s.validate()?;
        }
        let worst = self.sources.iter().map(|s| to_f64(s.chi)).fold(0.0, f64::max) * self.m() as f64;
        if worst >= FIRST_ORDER_LIMIT {
            log::warn!("chi * m = {worst:.3} is outside the first-order regime");
        }
        Ok(())
    }

    pub fn mean_eta_rc(&self) -> T {
        self.mean(|s| s.eta_rc)
    }

    pub fn mean_eta_s(&self) -> T {
        self.mean(|s| s.eta_s)
    }

    fn mean(&self, f: impl Fn(&SourceParams<T>) -> T) -> T {
        self.sources.iter().map(f).fold(T::zero(), |a, b| a + b) / lit(self.m() as f64)
    }

    /// Router transmission actually applied to source `i`.
    pub(crate) fn routed_eta(&self, i: usize) -> T {
        match self.routing {
            Routing::Direct => T::one(),
            Routing::Switched => self.sources[i].eta_rc,
        }
    }
}
