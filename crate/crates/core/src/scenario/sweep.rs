use rayon::prelude::*;

use super::calibrate::{calibrate_basis_noise, calibrate_linear, law_prediction, CalibrationResult, NoiseCalibration};
use super::config::{ScenarioConfig, SweepAxis};
use super::output::{derive_seed, num, opt, Table};
use super::ScenarioError;
use crate::detection::{
    composite_visibility, enhancement_at_chi, fixed_visibility_enhancement, interface_effective_state,
    interface_stokes_probability, multiplexed_rates, solve_common_chi, visibility_from_chsh, werner_fidelity,
    InterfaceParams,
};
use crate::quantum::PolarizationBasis;
use crate::sim::{
    decayed_interface, estimate_effective_state, estimate_visibility, per_trial, run_simulation, CountsTable,
    TimingConfig,
};

const TWO_SQRT2: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Interface and calibrations shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    /// Configured interface, with the fitted noise when calibration is applied.
    pub interface: InterfaceParams<f64>,
    pub noise: Option<NoiseCalibration>,
    /// Straight-line law, carrying the fitted retrieved-side background for
    /// its storage-time penalty.
    pub linear: CalibrationResult,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

pub fn prepare(cfg: &ScenarioConfig) -> Result<Prepared, ScenarioError> {
    let mut ip = cfg.interface_params()?;
    let timing = cfg.timing();
    let cal = &cfg.calibration;
    let noise = if cal.apply {
        let c = calibrate_basis_noise(&ip, &timing, &cal.visibilities, cal.at_p_s)?;
        for s in &mut ip.sources {
            s.noise = c.noise;
        }
        Some(c)
    } else {
        None
    };
    let points: Vec<(f64, f64)> = cal.table.iter().map(|r| (r[0], r[1])).collect();
    let mut linear = calibrate_linear(&points, ip.m(), ip.mean_eta_s())?;
    let g_t = mean(ip.sources.iter().map(|s| s.noise.hv.g_t));
    let gamma_ref = mean(decayed_interface(&ip, &timing).sources.iter().map(|s| s.gamma));
    linear.law = linear.law.with_decay(g_t, gamma_ref);
    Ok(Prepared { interface: ip, noise, linear })
}

/// One output line of a sweep.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepRow {
    pub axis: &'static str,
    pub value: f64,
    pub mode: &'static str,
    /// Mean excitation probability.
    pub chi: f64,
    pub p_s: f64,
    pub storage_time_us: f64,
    /// Stokes rate, per second.
    pub r: Option<f64>,
    /// Correlated and anti-correlated coincidence rates per basis, HV DA RL.
    pub c: [Option<f64>; 3],
    pub n: [Option<f64>; 3],
    pub v: [Option<f64>; 3],
    pub v_sigma: [Option<f64>; 3],
    pub s: Option<f64>,
    pub s_sigma: Option<f64>,
    /// `(3V + 1) / 4` with `V = S / 2 sqrt 2`.
    pub f: Option<f64>,
    pub f_sigma: Option<f64>,
    /// Overlap of the reconstructed state with the ideal source state.
    pub f_state: Option<f64>,
    pub f_state_sigma: Option<f64>,
    pub s_cal: Option<f64>,
    pub f_cal: Option<f64>,
    pub enh_r: Option<f64>,
    pub enh_c: Option<f64>,
    pub enh_r_fixed_v: Option<f64>,
    pub enh_c_fixed_v: Option<f64>,
}

const HEADER: [&str; 31] = [
    "axis", "value", "mode", "chi", "p_s", "storage_time_us", "R",
    "C_hv", "N_hv", "V_hv", "V_hv_sigma",
    "C_da", "N_da", "V_da", "V_da_sigma",
    "C_rl", "N_rl", "V_rl", "V_rl_sigma",
    "S", "S_sigma", "F", "F_sigma", "F_state", "F_state_sigma", "S_cal", "F_cal",
    "enh_R", "enh_C", "enh_R_fixed_v", "enh_C_fixed_v",
];

impl SweepRow {
    pub fn header() -> Vec<&'static str> {
        HEADER.to_vec()
    }

    pub fn record(&self) -> Vec<String> {
        let mut r = vec![
            self.axis.to_string(),
            num(self.value),
            self.mode.to_string(),
            num(self.chi),
            num(self.p_s),
            num(self.storage_time_us),
            opt(self.r),
        ];
        for k in 0..3 {
            r.extend([opt(self.c[k]), opt(self.n[k]), opt(self.v[k]), opt(self.v_sigma[k])]);
        }
        r.extend(
            [
                self.s,
                self.s_sigma,
                self.f,
                self.f_sigma,
                self.f_state,
                self.f_state_sigma,
                self.s_cal,
                self.f_cal,
                self.enh_r,
                self.enh_c,
                self.enh_r_fixed_v,
                self.enh_c_fixed_v,
            ]
            .map(opt),
        );
        r
    }

    pub fn visibility(&self, b: PolarizationBasis) -> Option<f64> {
        self.v[basis_index(b)]
    }
}

fn basis_index(b: PolarizationBasis) -> usize {
    PolarizationBasis::ALL.iter().position(|&x| x == b).expect("basis listed in ALL")
}

struct Point {
    value: f64,
    ip: InterfaceParams<f64>,
    timing: TimingConfig,
}

fn resolve_point(cfg: &ScenarioConfig, prep: &Prepared, value: f64) -> Result<Point, ScenarioError> {
    let ip = &prep.interface;
    let hv = PolarizationBasis::HV;
    let (ip, timing) = match cfg.sweep.axis {
        SweepAxis::Chi => (ip.clone().with_common_chi(value), cfg.timing()),
        SweepAxis::PS => (ip.clone().with_common_chi(solve_common_chi(ip, hv, value)?), cfg.timing()),
        SweepAxis::StorageTime => {
            let ip = match cfg.sweep.p_s {
                Some(p) => ip.clone().with_common_chi(solve_common_chi(ip, hv, p)?),
                None => ip.clone(),
            };
            (ip, cfg.timing_config(value))
        }
    };
    Ok(Point { value, ip, timing })
}

fn base_row(cfg: &ScenarioConfig, pt: &Point, mode: &'static str) -> SweepRow {
    SweepRow {
        axis: cfg.sweep.axis.name(),
        value: pt.value,
        mode,
        chi: mean(pt.ip.sources.iter().map(|s| s.chi)),
        storage_time_us: pt.timing.storage_time_us,
        ..SweepRow::default()
    }
}

fn calibrated_columns(row: &mut SweepRow, prep: &Prepared, dip: &InterfaceParams<f64>) {
    let law = prep.linear.law;
    let gamma = mean(dip.sources.iter().map(|s| s.gamma));
    let v = law.visibility(law.chi_bar(row.p_s), gamma);
    row.s_cal = Some(TWO_SQRT2 * v);
    row.f_cal = Some(werner_fidelity(v));
}

fn analytic_row(cfg: &ScenarioConfig, prep: &Prepared, pt: &Point) -> Result<SweepRow, ScenarioError> {
    let dip = decayed_interface(&pt.ip, &pt.timing);
    let hv = PolarizationBasis::HV;
    let mut row = base_row(cfg, pt, "analytic");
    row.p_s = interface_stokes_probability(&dip, hv)?;
    for &b in &cfg.bases {
        let k = basis_index(b);
        let rates = multiplexed_rates(&dip, b)?;
        row.r = Some(rates.stokes);
        row.c[k] = Some(rates.coincidence);
        row.n[k] = Some(rates.cross);
        row.v[k] = Some(composite_visibility(&dip, b)?);
    }
    let eff = interface_effective_state(&dip)?;
    row.s = Some(eff.chsh);
    row.f = Some(werner_fidelity(visibility_from_chsh(eff.chsh)));
    row.f_state = Some(eff.fidelity);
    calibrated_columns(&mut row, prep, &dip);
    let e = enhancement_at_chi(&dip, hv, row.chi)?;
    row.enh_r = Some(e.stokes);
    row.enh_c = Some(e.coincidence);
    // Undefined when background makes the single-source visibility peak
    // below the target.
    if let Ok(e) = fixed_visibility_enhancement(&dip, hv, composite_visibility(&dip, hv)?) {
        row.enh_r_fixed_v = Some(e.stokes);
        row.enh_c_fixed_v = Some(e.coincidence);
    }
    Ok(row)
}

fn mc_row(cfg: &ScenarioConfig, prep: &Prepared, pt: &Point, index: u64) -> Result<SweepRow, ScenarioError> {
    let mut row = base_row(cfg, pt, "mc");
    let rate = pt.timing.rate;
    let mut tables: [Option<CountsTable>; 3] = [None, None, None];
    let (mut fired, mut trials) = (0u64, 0u64);
    for &b in &cfg.bases {
        let k = basis_index(b);
        let seed = derive_seed(cfg.seed, &[index, k as u64]);
        let counts = run_simulation(seed, &pt.ip, &pt.timing, b, cfg.cycles)?;
        let pooled = counts.pooled();
        let (c, n) = pooled.contrast(b);
        row.c[k] = Some(per_trial(c, counts.trials).value * rate);
        row.n[k] = Some(per_trial(n, counts.trials).value * rate);
        if let Ok(v) = estimate_visibility(&counts, derive_seed(seed, &[1])) {
            row.v[k] = Some(v.value);
            row.v_sigma[k] = Some(v.sigma);
        }
        fired += counts.fired();
        trials += counts.trials;
        tables[k] = Some(counts);
    }
    row.p_s = per_trial(fired, trials).value;
    row.r = Some(row.p_s * rate);
    if let [Some(hv), Some(da), Some(rl)] = &tables {
        let seed = derive_seed(cfg.seed, &[index, 3]);
        let theta = pt.ip.sources[0].theta;
        if let Ok((s, f)) = estimate_effective_state(&hv.pooled(), &da.pooled(), &rl.pooled(), theta, seed) {
            row.s = Some(s.value);
            row.s_sigma = Some(s.sigma);
            row.f = Some(werner_fidelity(visibility_from_chsh(s.value)));
            row.f_sigma = Some(0.75 * s.sigma / TWO_SQRT2);
            row.f_state = Some(f.value);
            row.f_state_sigma = Some(f.sigma);
        }
    }
    calibrated_columns(&mut row, prep, &decayed_interface(&pt.ip, &pt.timing));
    Ok(row)
}

/// Evaluates every sweep point. Rows come out in sweep order, analytic
/// before Monte Carlo for each point.
pub fn run_sweep(cfg: &ScenarioConfig, prep: &Prepared) -> Result<Vec<SweepRow>, ScenarioError> {
    let per_point: Vec<Result<Vec<SweepRow>, ScenarioError>> = cfg
        .sweep
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let ctx = format!("sweep point {}={v}", cfg.sweep.axis.name());
            let wrap = |e: ScenarioError| match e {
                ScenarioError::Runtime(m) => ScenarioError::at(&ctx, m),
                other => other,
            };
            let pt = resolve_point(cfg, prep, v).map_err(wrap)?;
            let mut rows = Vec::new();
            if cfg.mode.analytic() {
                rows.push(analytic_row(cfg, prep, &pt).map_err(wrap)?);
            }
            if cfg.mode.mc() {
                rows.push(mc_row(cfg, prep, &pt, i as u64).map_err(wrap)?);
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&SweepRow::header());
    for r in rows {
        t.push(r.record());
    }
    t
}

/// Long-format report of both calibrations: `kind, key, value, target, residual`.
pub fn calibrate_scenario(cfg: &ScenarioConfig, prep: &Prepared) -> Table {
    let mut t = Table::new(&["kind", "key", "value", "target", "residual"]);
    let mut push = |kind: &str, key: String, value: f64, target: Option<f64>| {
        t.push(vec![kind.into(), key, num(value), opt(target), opt(target.map(|x| value - x))]);
    };
    let lin = &prep.linear;
    push("linear", "v0".into(), lin.law.v0, None);
    push("linear", "slope_per_p_s".into(), lin.law.slope, None);
    push("linear", "z_bar".into(), lin.law.z_bar(), None);
    push("linear", "k_bar".into(), lin.law.k_bar(), None);
    push("linear", "residual_norm_s".into(), lin.residual_norm, None);
    for r in &cfg.calibration.table {
        let (s, f) = law_prediction(&lin.law, r[0]);
        push("linear_s", num(r[0]), s, Some(r[1]));
        push("linear_f", num(r[0]), f, Some(r[2]));
    }
    if let Some(n) = &prep.noise {
        push("noise", "chi".into(), n.chi, None);
        for (k, b) in PolarizationBasis::ALL.into_iter().enumerate() {
            let bn = n.noise.get(b);
            let tag = b.name().to_ascii_lowercase();
            push("noise", format!("{tag}.a"), bn.a, None);
            push("noise", format!("{tag}.b"), bn.b, None);
            push("noise", format!("{tag}.g_s"), bn.g_s, None);
            push("noise", format!("{tag}.g_t"), bn.g_t, None);
            push("visibility", tag, n.visibilities[k], Some(n.targets[k]));
        }
    }
    t
}
