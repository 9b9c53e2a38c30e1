use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ConfigError;
use crate::detection::{Depletion, InterfaceParams, NoiseModel, Routing, SourceParams};
use crate::quantum::PolarizationBasis;
use crate::sim::TimingConfig;

/// Router transmission per channel.
pub const DEFAULT_ETA_RC: [f64; 6] = [0.689, 0.672, 0.705, 0.689, 0.680, 0.664];
/// Stokes detection efficiency per channel.
pub const DEFAULT_ETA_S: [f64; 6] = [0.29, 0.29, 0.29, 0.30, 0.30, 0.29];
/// Anti-Stokes detection efficiency per channel.
pub const DEFAULT_ETA_T: [f64; 6] = [0.30, 0.29, 0.29, 0.30, 0.28, 0.29];
/// Retrieval efficiency per source.
pub const DEFAULT_GAMMA: [f64; 6] = [0.156, 0.156, 0.160, 0.151, 0.158, 0.158];
/// Measured `(p_S, S, F)` triples of the six-source interface at 1 us storage.
pub const BELL_TABLE: [[f64; 3]; 5] = [
    [0.0126, 2.49, 0.87],
    [0.0297, 2.38, 0.85],
    [0.0421, 2.29, 0.82],
    [0.0594, 2.17, 0.78],
    [0.0738, 2.09, 0.75],
];

/// A value shared by all sources or one value per source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerSource {
    Scalar(f64),
    List(Vec<f64>),
}

impl PerSource {
    pub fn expand(&self, m: usize, field: &str) -> Result<Vec<f64>, ConfigError> {
        match self {
            PerSource::Scalar(v) => Ok(vec![*v; m]),
            PerSource::List(v) if v.len() == m => Ok(v.clone()),
            PerSource::List(v) => Err(ConfigError::invalid(
                format!("interface.{field}"),
                format!("has {} entries but count is {m}", v.len()),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Analytic,
    #[serde(alias = "montecarlo")]
    Mc,
    Both,
}

impl Mode {
    pub fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    pub fn mc(self) -> bool {
        matches!(self, Mode::Mc | Mode::Both)
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(Mode::Analytic),
            "mc" | "montecarlo" => Ok(Mode::Mc),
            "both" => Ok(Mode::Both),
            other => Err(format!("unknown mode `{other}`; expected analytic, mc or both")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterfaceConfig {
    /// Number of sources.
    pub count: usize,
    /// Write trials per second.
    pub rate: f64,
    pub theta_deg: f64,
    pub chi: PerSource,
    pub gamma: PerSource,
    pub eta_s: PerSource,
    pub eta_t: PerSource,
    pub eta_rc: PerSource,
    pub routing: Routing,
    pub depletion: Depletion,
}

impl Default for InterfaceConfig {
    fn default() -> Self {
        Self {
            count: 6,
            rate: 6.7e5,
            theta_deg: 36.45,
            chi: PerSource::Scalar(0.00724),
            gamma: PerSource::List(DEFAULT_GAMMA.to_vec()),
            eta_s: PerSource::List(DEFAULT_ETA_S.to_vec()),
            eta_t: PerSource::List(DEFAULT_ETA_T.to_vec()),
            eta_rc: PerSource::List(DEFAULT_ETA_RC.to_vec()),
            routing: Routing::Switched,
            depletion: Depletion::MeanField,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimingSection {
    pub max_trials: u32,
    pub storage_time_us: f64,
    pub lifetime_us: f64,
    pub gamma0: Option<f64>,
}

impl Default for TimingSection {
    fn default() -> Self {
        let t = TimingConfig::default();
        Self { max_trials: t.max_trials, storage_time_us: t.storage_time_us, lifetime_us: t.lifetime_us, gamma0: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Common excitation probability.
    Chi,
    /// Interface Stokes probability per trial.
    PS,
    /// Storage time in microseconds.
    StorageTime,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Chi => "chi",
            SweepAxis::PS => "p_s",
            SweepAxis::StorageTime => "storage_time_us",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Operating Stokes probability for a storage-time sweep; when absent the
    /// configured excitation probabilities are used.
    pub p_s: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { axis: SweepAxis::PS, values: BELL_TABLE.iter().map(|r| r[0]).collect(), p_s: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasisTargets {
    pub hv: f64,
    pub da: f64,
    pub rl: f64,
}

impl Default for BasisTargets {
    fn default() -> Self {
        Self { hv: 0.941, da: 0.844, rl: 0.816 }
    }
}

impl BasisTargets {
    pub fn get(&self, b: PolarizationBasis) -> f64 {
        match b {
            PolarizationBasis::HV => self.hv,
            PolarizationBasis::DA => self.da,
            PolarizationBasis::RL => self.rl,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    /// Replace the configured noise by the basis-visibility fit before sweeping.
    pub apply: bool,
    /// Interface Stokes probability at which `visibilities` were measured.
    pub at_p_s: f64,
    pub visibilities: BasisTargets,
    /// `(p_S, S, F)` rows for the straight-line Bell law; `F` may be NaN-free
    /// placeholder if unknown.
    pub table: Vec<[f64; 3]>,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self { apply: true, at_p_s: 0.0126, visibilities: BasisTargets::default(), table: BELL_TABLE.to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RepeaterConfig {
    pub l0_km: f64,
    pub l_att_km: f64,
    pub nesting: u32,
    pub c_km_s: f64,
    /// Frequency-conversion efficiencies to tabulate.
    pub eta_dc: Vec<f64>,
    /// Mode counts to tabulate; each must not exceed the interface count.
    pub modes: Vec<usize>,
    /// Swap success per level; defaults to `1/2 gamma^2 eta_S^2` of the mean source.
    pub swap_success: Option<f64>,
    pub zeta: f64,
}

impl Default for RepeaterConfig {
    fn default() -> Self {
        Self {
            l0_km: 50.0,
            l_att_km: crate::repeater::ATTENUATION_LENGTH_KM,
            nesting: 1,
            c_km_s: crate::repeater::FIBER_LIGHT_SPEED_KM_S,
            eta_dc: vec![1.0, 0.136],
            modes: vec![1, 6],
            swap_success: None,
            zeta: 1.0,
        }
    }
}

/// Everything a run needs. Loads from TOML with every key optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub mode: Mode,
    pub cycles: u64,
    pub bases: Vec<PolarizationBasis>,
    pub output: Option<String>,
    pub interface: InterfaceConfig,
    pub noise: NoiseModel<f64>,
    pub timing: TimingSection,
    pub sweep: SweepConfig,
    pub calibration: CalibrationConfig,
    pub repeater: RepeaterConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            mode: Mode::Analytic,
            cycles: 1_000_000,
            bases: PolarizationBasis::ALL.to_vec(),
            output: None,
            interface: InterfaceConfig::default(),
            noise: NoiseModel::default(),
            timing: TimingSection::default(),
            sweep: SweepConfig::default(),
            calibration: CalibrationConfig::default(),
            repeater: RepeaterConfig::default(),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses and validates a scenario.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Canonical TOML form; `load_scenario(emit_scenario(c)) == c`.
pub fn emit_scenario(cfg: &ScenarioConfig) -> String {
    toml::to_string(cfg).expect("scenario config always serializes")
}

impl ScenarioConfig {
    /// SHA-256 of the canonical TOML, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(emit_scenario(self).as_bytes()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let inv = |f: &str, m: String| Err(ConfigError::invalid(f, m));
        let ic = &self.interface;
        if ic.count == 0 {
            return inv("interface.count", "must be at least 1".into());
        }
        if !(ic.rate > 0.0 && ic.rate.is_finite()) {
            return inv("interface.rate", format!("must be positive, got {}", ic.rate));
        }
        if !(0.0..=90.0).contains(&ic.theta_deg) {
            return inv("interface.theta_deg", format!("must lie in [0, 90], got {}", ic.theta_deg));
        }
        self.interface_params()?;
        self.timing_config(0.0).validate().map_err(|m| ConfigError::invalid("timing", m))?;
        if self.cycles == 0 {
            return inv("cycles", "must be at least 1".into());
        }
        if self.bases.is_empty() {
            return inv("bases", "needs at least one basis".into());
        }
        let mut seen = self.bases.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.bases.len() {
            return inv("bases", "lists a basis twice".into());
        }
        if self.sweep.values.is_empty() {
            return inv("sweep.values", "needs at least one point".into());
        }
        for &v in &self.sweep.values {
            let ok = match self.sweep.axis {
                SweepAxis::Chi | SweepAxis::PS => v > 0.0 && v < 1.0,
                SweepAxis::StorageTime => v >= 0.0 && v.is_finite(),
            };
            if !ok {
                return inv("sweep.values", format!("{v} is not a valid {}", self.sweep.axis.name()));
            }
        }
        if let Some(p) = self.sweep.p_s {
            if !(p > 0.0 && p < 1.0) {
                return inv("sweep.p_s", format!("must lie in (0, 1), got {p}"));
            }
        }
        let cal = &self.calibration;
        if !(cal.at_p_s > 0.0 && cal.at_p_s < 1.0) {
            return inv("calibration.at_p_s", format!("must lie in (0, 1), got {}", cal.at_p_s));
        }
        for b in PolarizationBasis::ALL {
            let v = cal.visibilities.get(b);
            if !(v > 0.0 && v < 1.0) {
                return inv("calibration.visibilities", format!("{b} target {v} must lie in (0, 1)"));
            }
        }
        if cal.table.len() < 2 {
            return inv("calibration.table", "needs at least two rows".into());
        }
        let r = &self.repeater;
        if !(r.l0_km >= 0.0 && r.l0_km.is_finite()) {
            return inv("repeater.l0_km", format!("must be non-negative, got {}", r.l0_km));
        }
        if !(r.l_att_km > 0.0) || !(r.c_km_s > 0.0) {
            return inv("repeater", "attenuation length and fiber light speed must be positive".into());
        }
        if r.eta_dc.is_empty() || r.eta_dc.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return inv("repeater.eta_dc", "needs values in (0, 1]".into());
        }
        if r.modes.is_empty() || r.modes.iter().any(|&m| m == 0 || m > ic.count) {
            return inv("repeater.modes", format!("needs values in 1..={}", ic.count));
        }
        if let Some(p) = r.swap_success {
            if !(p > 0.0 && p <= 1.0) {
                return inv("repeater.swap_success", format!("must lie in (0, 1], got {p}"));
            }
        }
        if !(0.0..=1.0).contains(&r.zeta) {
            return inv("repeater.zeta", format!("must lie in [0, 1], got {}", r.zeta));
        }
        Ok(())
    }

    /// Interface with the configured noise.
    pub fn interface_params(&self) -> Result<InterfaceParams<f64>, ConfigError> {
        let ic = &self.interface;
        let m = ic.count;
        let chi = ic.chi.expand(m, "chi")?;
        let gamma = ic.gamma.expand(m, "gamma")?;
        let eta_s = ic.eta_s.expand(m, "eta_s")?;
        let eta_t = ic.eta_t.expand(m, "eta_t")?;
        let eta_rc = ic.eta_rc.expand(m, "eta_rc")?;
        let theta = ic.theta_deg.to_radians();
        let sources = (0..m)
            .map(|i| SourceParams {
                chi: chi[i],
                theta,
                gamma: gamma[i],
                eta_s: eta_s[i],
                eta_t: eta_t[i],
                eta_rc: eta_rc[i],
                noise: self.noise,
            })
            .collect();
        let ip = InterfaceParams::new(sources, ic.rate)
            .map_err(|e| match e {
                crate::detection::DetectionError::InvalidParam { field, value } => {
                    let name = match field {
                        "a" | "b" | "g_s" | "g_t" => format!("noise.{field}"),
                        f => format!("interface.{f}"),
                    };
                    ConfigError::invalid(name, format!("value {value} is out of range"))
                }
                other => ConfigError::invalid("interface", other.to_string()),
            })?
            .with_routing(ic.routing)
            .with_depletion(ic.depletion);
        Ok(ip)
    }

    pub fn timing_config(&self, storage_time_us: f64) -> TimingConfig {
        TimingConfig {
            rate: self.interface.rate,
            max_trials: self.timing.max_trials,
            storage_time_us,
            lifetime_us: self.timing.lifetime_us,
            gamma0: self.timing.gamma0,
        }
    }

    /// Timing at the configured storage time.
    pub fn timing(&self) -> TimingConfig {
        self.timing_config(self.timing.storage_time_us)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = load_scenario("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        let ip = cfg.interface_params().unwrap();
        assert_eq!(ip.m(), 6);
        assert_eq!(ip.rate, 6.7e5);
        assert!((ip.mean_eta_rc() - 0.6831666).abs() < 1e-6);
        assert_eq!(cfg.timing().storage_time_us, 1.0);
        assert_eq!(cfg.timing().lifetime_us, 66.7);
    }

    #[test]
    fn round_trip_is_exact() {
        let text = "seed = 9\nmode = \"both\"\n[interface]\ncount = 2\nchi = [0.01, 0.0123456789012345]\n\
                    gamma = 0.15\neta_s = 0.3\neta_t = 0.3\neta_rc = [0.7, 0.1]\n[noise.hv]\ng_t = 1e-4\n\
                    [repeater]\nmodes = [1, 2]\n";
        let cfg = load_scenario(text).unwrap();
        let emitted = emit_scenario(&cfg);
        let again = load_scenario(&emitted).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(emit_scenario(&again), emitted);
        assert_eq!(again.hash(), cfg.hash());
    }

    #[test]
    fn zero_sources_rejected() {
        let e = load_scenario("[interface]\ncount = 0\n").unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { ref field, .. } if field == "interface.count"), "{e}");
    }

    #[test]
    fn list_length_must_match() {
        let e = load_scenario("[interface]\ncount = 3\nchi = [0.01, 0.02]\n").unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { ref field, .. } if field == "interface.chi"), "{e}");
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = load_scenario("seed = 1\n\n[interface]\ncolor = 3\n").unwrap_err();
        match e {
            ConfigError::Parse { line, message } => {
                assert_eq!(line, Some(4));
                assert!(message.contains("color"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn out_of_range_noise_names_field() {
        let e = load_scenario("[noise.da]\na = 0.7\n").unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { ref field, .. } if field == "noise.a"), "{e}");
    }
}
