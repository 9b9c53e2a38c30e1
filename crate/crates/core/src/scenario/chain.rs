use super::config::ScenarioConfig;
use super::output::{num, opt, Table};
use super::sweep::Prepared;
use super::ScenarioError;
use crate::detection::{per_source_effective_states, prob_table, visibility_from_chsh, InterfaceParams};
use crate::quantum::PolarizationBasis;
use crate::repeater::{
    composite_link_quality, link_success_multiplexed, mean_channel_success, speedup, swap_success_probability,
    total_time, ChainParams, ChannelQuality, LinkParams, TotalTime,
};
use crate::sim::decayed_interface;

/// Distribution time and link quality for one mode count and conversion
/// efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeaterRow {
    pub m: usize,
    pub nesting: u32,
    pub eta_dc: f64,
    pub l0_km: f64,
    pub l_km: f64,
    pub eta_rc_bar: f64,
    pub swap_success: f64,
    pub p_link_single: f64,
    pub p_link_multiplexed: f64,
    pub t_single: TotalTime<f64>,
    pub t_multiplexed: TotalTime<f64>,
    pub speedup: Option<f64>,
    pub v_ab: f64,
    pub f_ab: f64,
    pub s_ab: f64,
    pub v_ab_product: f64,
}

const HEADER: [&str; 17] = [
    "m", "n", "eta_dc", "l0_km", "l_km", "eta_rc_bar", "swap_success", "p_link_single", "p_link_multiplexed",
    "T_single_s", "T_multiplexed_s", "unreachable", "speedup", "V_AB", "F_AB", "S_AB", "V_AB_product",
];

impl RepeaterRow {
    pub fn record(&self) -> Vec<String> {
        let unreachable = matches!(self.t_single, TotalTime::Unreachable) || matches!(self.t_multiplexed, TotalTime::Unreachable);
        vec![
            self.m.to_string(),
            self.nesting.to_string(),
            num(self.eta_dc),
            num(self.l0_km),
            num(self.l_km),
            num(self.eta_rc_bar),
            num(self.swap_success),
            num(self.p_link_single),
            num(self.p_link_multiplexed),
            opt(self.t_single.seconds()),
            opt(self.t_multiplexed.seconds()),
            unreachable.to_string(),
            opt(self.speedup),
            num(self.v_ab),
            num(self.f_ab),
            num(self.s_ab),
            num(self.v_ab_product),
        ]
    }
}

fn first(ip: &InterfaceParams<f64>, m: usize) -> Result<InterfaceParams<f64>, ScenarioError> {
    let mut sub = ip.clone();
    sub.sources.truncate(m);
    sub.validate()?;
    Ok(sub)
}

/// One row per `(modes, eta_dc)` pair, modes outermost. Both link ends use
/// the first `m` sources of the configured interface at the configured
/// storage time.
pub fn run_repeater(cfg: &ScenarioConfig, prep: &Prepared) -> Result<Vec<RepeaterRow>, ScenarioError> {
    let rc = &cfg.repeater;
    let dip = decayed_interface(&prep.interface, &cfg.timing());
    let mut rows = Vec::new();
    for &m in &rc.modes {
        let sub = first(&dip, m)?;
        let p_s: Vec<f64> =
            sub.sources.iter().map(|s| prob_table(s, PolarizationBasis::HV).map(|r| r.p_s())).collect::<Result<_, _>>()?;
        let v: Vec<f64> = per_source_effective_states(&sub)?.iter().map(|e| visibility_from_chsh(e.chsh)).collect();
        let channels: Vec<ChannelQuality<f64>> =
            (0..m).map(|i| ChannelQuality { p_s_a: p_s[i], p_s_b: p_s[i], v_a: v[i], v_b: v[i] }).collect();
        let q = composite_link_quality(&channels, rc.zeta);
        let mean_of = |f: fn(&crate::detection::SourceParams<f64>) -> f64| sub.sources.iter().map(f).sum::<f64>() / m as f64;
        let (gamma, eta_s) = (mean_of(|s| s.gamma), mean_of(|s| s.eta_s));
        let swap = rc.swap_success.unwrap_or_else(|| swap_success_probability(gamma, gamma, eta_s, eta_s));
        let eta_rc_bar = sub.mean_eta_rc();
        let l_km = rc.l0_km * 2f64.powi(rc.nesting as i32);
        let mut cp = ChainParams::new(l_km, rc.nesting, vec![swap; rc.nesting as usize], eta_rc_bar)?;
        cp.c_km_s = rc.c_km_s;
        for &eta_dc in &rc.eta_dc {
            let lp = LinkParams { l0_km: rc.l0_km, l_att_km: rc.l_att_km, eta_dc, p_s_a: p_s.clone(), p_s_b: p_s.clone() };
            lp.validate()?;
            let p1 = mean_channel_success(&lp);
            let pm = link_success_multiplexed(&lp);
            rows.push(RepeaterRow {
                m,
                nesting: rc.nesting,
                eta_dc,
                l0_km: rc.l0_km,
                l_km,
                eta_rc_bar,
                swap_success: swap,
                p_link_single: p1,
                p_link_multiplexed: pm,
                t_single: total_time(&cp, p1, false),
                t_multiplexed: total_time(&cp, pm, m > 1),
                speedup: speedup(&cp, p1, m),
                v_ab: q.exact.v_ab,
                f_ab: q.exact.f_ab,
                s_ab: q.exact.s_ab,
                v_ab_product: q.product.v_ab,
            });
        }
    }
    Ok(rows)
}

pub fn repeater_table(rows: &[RepeaterRow]) -> Table {
    let mut t = Table::new(&HEADER);
    for r in rows {
        t.push(r.record());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::sweep::prepare;
    use approx::assert_abs_diff_eq;

    #[test]
    fn default_table() {
        let cfg = ScenarioConfig::default();
        let prep = prepare(&cfg).unwrap();
        let rows = run_repeater(&cfg, &prep).unwrap();
        assert_eq!(rows.iter().map(|r| (r.m, r.eta_dc)).collect::<Vec<_>>(), [(1, 1.0), (1, 0.136), (6, 1.0), (6, 0.136)]);
        assert_eq!(rows[0].speedup, Some(1.0));
        let six = &rows[2];
        assert_abs_diff_eq!(six.speedup.unwrap(), 6.0 * six.eta_rc_bar.powi(2), epsilon = 1e-12);
        assert_abs_diff_eq!(six.speedup.unwrap(), 2.80, epsilon = 0.005);
        for (hi, lo) in [(&rows[0], &rows[1]), (&rows[2], &rows[3])] {
            let r = lo.t_single.ratio(&hi.t_single).unwrap();
            assert_abs_diff_eq!(r, 1.0 / (0.136f64 * 0.136), epsilon = 1e-9);
        }
        assert!(six.v_ab > 0.0 && six.v_ab < 1.0);
        assert_eq!(repeater_table(&rows).rows.len(), 4);
    }
}
