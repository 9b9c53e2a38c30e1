mod common;

use common::density_from;
use muxsim::detection::{
    composite_visibility_pooled, composite_visibility_weighted, multiplexed_prob_table, multiplexed_rates,
    single_source_rates, single_source_visibility, werner_fidelity, BasisNoise, InterfaceParams, NoiseModel, Routing,
    SourceParams,
};
use muxsim::quantum::{
    chsh, coincidence_probs, pauli_expectations, tomography_reconstruct, uhlmann_fidelity, AnalyzerSetting,
    ChshAngles, DensityMatrix, PolarizationBasis, PureState,
};
use muxsim::repeater::{
    composite_link_quality, link_fidelity_from_fidelities, link_success_multiplexed, link_success_single,
    multiplexed_from_single, speedup, ChainParams, ChannelQuality, LinkParams,
};
use muxsim::scenario::{emit_scenario, load_scenario, PerSource, ScenarioConfig};
use muxsim::sim::{run_simulation, TimingConfig};
use nalgebra::Matrix2;
use proptest::prelude::*;

const TWO_SQRT2: f64 = 2.0 * std::f64::consts::SQRT_2;

fn state() -> impl Strategy<Value = DensityMatrix<f64>> {
    (prop::collection::vec(-1.0f64..1.0, 32), 1usize..=4).prop_map(|(v, r)| density_from(&v, r))
}

fn angles() -> impl Strategy<Value = ChshAngles<f64>> {
    (0.0f64..180.0, 0.0f64..180.0, 0.0f64..180.0, 0.0f64..180.0)
        .prop_map(|(s, s_prime, t, t_prime)| ChshAngles { s, s_prime, t, t_prime })
}

fn qubit() -> impl Strategy<Value = Matrix2<muxsim::quantum::C<f64>>> {
    (0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU, 0.0f64..1.0).prop_map(|(th, ph, p)| {
        let a = C::new((th / 2.0).cos(), 0.0);
        let b = C::from_polar((th / 2.0).sin(), ph);
        let pure = Matrix2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj());
        pure * C::new(p, 0.0) + Matrix2::identity() * C::new((1.0 - p) / 2.0, 0.0)
    })
}

use muxsim::quantum::C;

fn source() -> impl Strategy<Value = SourceParams<f64>> {
    source_in(0.0..90.0)
}

fn source_in(theta_deg: std::ops::Range<f64>) -> impl Strategy<Value = SourceParams<f64>> {
    (0.001f64..0.03, theta_deg, 0.05f64..0.6, 0.1f64..0.6, 0.1f64..0.6, 0.3f64..1.0).prop_map(
        |(chi, deg, gamma, eta_s, eta_t, eta_rc)| SourceParams {
            eta_rc,
            ..SourceParams::ideal(chi, deg.to_radians(), gamma, eta_s, eta_t)
        },
    )
}

fn noise() -> impl Strategy<Value = BasisNoise<f64>> {
    (0.0f64..0.05, 0.0f64..0.05, 0.0f64..1e-3, 0.0f64..1e-3).prop_map(|(a, b, g_s, g_t)| BasisNoise { a, b, g_s, g_t })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tsirelson_bound(rho in state(), a in angles()) {
        prop_assert!(chsh(&rho, &a).abs() <= TWO_SQRT2 + 1e-9);
    }

    #[test]
    fn product_states_are_local(a in qubit(), b in qubit(), ang in angles()) {
        let rho = DensityMatrix::product(&a, &b).unwrap();
        prop_assert!(chsh(&rho, &ang).abs() <= 2.0 + 1e-9);
    }

    #[test]
    fn werner_identities(v in 0.0f64..=1.0) {
        let rho = DensityMatrix::werner(v).unwrap();
        prop_assert!((chsh(&rho, &ChshAngles::canonical()) - TWO_SQRT2 * v).abs() < 1e-12);
        let f = uhlmann_fidelity(&rho, &PureState::phi_plus().projector());
        prop_assert!((f - werner_fidelity(v)).abs() < 1e-12);
    }

    #[test]
    fn outcome_probabilities_sum_to_one(rho in state(), s in 0.0f64..180.0, t in 0.0f64..180.0) {
        let p = coincidence_probs(&rho, &AnalyzerSetting::linear(s, t));
        let total: f64 = p.iter().flatten().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for b in PolarizationBasis::ALL {
            let total: f64 = coincidence_probs(&rho, &AnalyzerSetting::basis(b)).iter().flatten().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tomography_round_trip(rho in state()) {
        let back = tomography_reconstruct(&pauli_expectations(&rho));
        prop_assert!(back.max_abs_diff(&rho) < 1e-9);
    }

    #[test]
    fn composite_visibility_forms_agree(
        sources in prop::collection::vec(source(), 1..=8),
        n in noise(),
        basis in prop::sample::select(PolarizationBasis::ALL.to_vec()),
    ) {
        let sources = sources.into_iter().map(|s| s.with_noise(NoiseModel::uniform(n))).collect();
        let ip = InterfaceParams::new(sources, 6.7e5).unwrap();
        let rows = multiplexed_prob_table(&ip, basis).unwrap();
        let sign = |r: &muxsim::detection::ProbRow<f64>| (r.correlated() - r.anticorrelated()).signum();
        prop_assume!(rows.iter().all(|r| sign(r) == sign(&rows[0])));
        let w = composite_visibility_weighted(&rows).unwrap();
        let p = composite_visibility_pooled(&rows).unwrap();
        prop_assert!((w - p).abs() < 1e-12, "{w} vs {p}");
    }

    #[test]
    fn coincidence_total_is_basis_independent(sources in prop::collection::vec(source(), 1..=8)) {
        let ip = InterfaceParams::new(sources, 6.7e5).unwrap();
        let totals: Vec<f64> = PolarizationBasis::ALL
            .iter()
            .map(|&b| { let r = multiplexed_rates(&ip, b).unwrap(); (r.coincidence + r.cross) / ip.rate })
            .collect();
        prop_assert!((totals[0] - totals[1]).abs() <= 1e-15);
        prop_assert!((totals[0] - totals[2]).abs() <= 1e-15);
    }

    #[test]
    fn visibility_falls_with_excitation_and_background(
        s in source_in(30.0..60.0),
        a in 0.0f64..0.05,
        b in 0.0f64..0.05,
        g in 0.0f64..1e-3,
        c1 in 0.005f64..0.05,
        c2 in 0.005f64..0.05,
        extra in 0.0f64..1e-3,
        basis in prop::sample::select(PolarizationBasis::ALL.to_vec()),
    ) {
        // Monotone in excitation only without background, where a flat
        // background is diluted as the signal grows, and away from product
        // states, whose accidentals are themselves correlated.
        let s = s.with_noise(NoiseModel::uniform(BasisNoise::crosstalk(a, b)));
        let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
        let v_lo = single_source_visibility(&s.with_chi(lo), basis).unwrap();
        let v_hi = single_source_visibility(&s.with_chi(hi), basis).unwrap();
        prop_assert!(v_hi <= v_lo + 1e-12, "{v_lo} -> {v_hi}");
        let base = s.with_noise(NoiseModel::uniform(BasisNoise::crosstalk(a, b).with_background(g)));
        let more = s.with_noise(NoiseModel::uniform(BasisNoise::crosstalk(a, b).with_background(g + extra)));
        prop_assert!(single_source_visibility(&more, basis).unwrap() <= single_source_visibility(&base, basis).unwrap() + 1e-12);
    }

    #[test]
    fn one_source_interface_is_the_source(s in source(), n in noise(), basis in prop::sample::select(PolarizationBasis::ALL.to_vec())) {
        let s = s.with_noise(NoiseModel::uniform(n));
        let ip = InterfaceParams::single(s, 6.7e5).unwrap();
        prop_assert_eq!(ip.routing, Routing::Direct);
        prop_assert_eq!(multiplexed_rates(&ip, basis).unwrap(), single_source_rates(&s, 6.7e5, basis).unwrap());
    }

    #[test]
    fn simulation_is_deterministic(seed in any::<u64>(), chi in 0.001f64..0.03, m in 1usize..=4) {
        let ip = InterfaceParams::new(vec![common::table_interface(chi).sources[0]; m], 6.7e5).unwrap();
        let t = TimingConfig::default();
        let a = run_simulation(seed, &ip, &t, PolarizationBasis::DA, 3000).unwrap();
        let b = run_simulation(seed, &ip, &t, PolarizationBasis::DA, 3000).unwrap();
        prop_assert!(a.fired() <= a.cycles);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multiplexed_success_is_sublinear(p in 0.0f64..=1.0, m in 1usize..=64) {
        let pm = multiplexed_from_single(p, m);
        prop_assert!(pm <= m as f64 * p * (1.0 + 1e-12) + 1e-300);
        if m == 1 {
            prop_assert!((pm - p).abs() <= 1e-15);
        } else if p > 1e-6 {
            prop_assert!(pm < m as f64 * p);
        }
    }

    #[test]
    fn one_channel_link_is_single(l0 in 0.0f64..200.0, eta_dc in 0.01f64..=1.0, pa in 0.0f64..0.1, pb in 0.0f64..0.1) {
        let lp = LinkParams::uniform(l0, eta_dc, 1, pa, pb).unwrap();
        prop_assert!((link_success_multiplexed(&lp) - link_success_single(&lp, 0)).abs() <= 1e-18 + 1e-15 * link_success_single(&lp, 0));
    }

    #[test]
    fn speedup_identity(n in 0u32..=4, m in 2usize..=16, eta in 0.3f64..=1.0, p in 1e-9f64..1e-3, swap in 1e-4f64..0.5) {
        let cp = ChainParams::new(100.0 * 2f64.powi(n as i32), n, vec![swap; n as usize], eta).unwrap();
        let s = speedup(&cp, p, m).unwrap();
        let want = m as f64 * eta.powi(2 * n as i32);
        prop_assert!((s / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn link_quality_identities(va in 0.0f64..=1.0, vb in 0.0f64..=1.0, m in 1usize..=8) {
        let ch = vec![ChannelQuality { p_s_a: 0.003, p_s_b: 0.004, v_a: va, v_b: vb }; m];
        let q = composite_link_quality(&ch, 1.0);
        let f = link_fidelity_from_fidelities(werner_fidelity(va), werner_fidelity(vb));
        prop_assert!((q.exact.f_ab - f).abs() < 1e-12);
        prop_assert!((q.exact.v_ab - q.product.v_ab).abs() < 1e-12);
        if va * vb <= std::f64::consts::FRAC_1_SQRT_2 {
            prop_assert!(q.exact.s_ab <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn scenario_round_trip(
        seed in any::<u64>(),
        count in 1usize..=8,
        chi in prop::collection::vec(1e-4f64..0.03, 8),
        cycles in 1u64..10_000_000,
        theta in 0.0f64..=90.0,
        g_t in 0.0f64..1e-3,
    ) {
        let mut cfg = ScenarioConfig { seed, cycles, ..ScenarioConfig::default() };
        cfg.interface.count = count;
        cfg.interface.theta_deg = theta;
        cfg.interface.chi = PerSource::List(chi[..count].to_vec());
        cfg.interface.gamma = PerSource::Scalar(0.3);
        cfg.interface.eta_s = PerSource::Scalar(0.3);
        cfg.interface.eta_t = PerSource::Scalar(0.3);
        cfg.interface.eta_rc = PerSource::Scalar(0.3);
        cfg.noise.hv.g_t = g_t;
        cfg.repeater.modes = vec![1, count];
        let text = emit_scenario(&cfg);
        let back = load_scenario(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(emit_scenario(&back), text);
    }
}
