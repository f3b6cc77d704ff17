use diamond_transport::analysis::{incoherent_efficiency, persistent_crossover};
use diamond_transport::{
    compare_transport, gamma_sweep, run_scenario, CompareParams, Configuration, NoiseSpec, Scenario, ScenarioKind,
    SweepParams,
};

#[test]
fn fixed_network_favours_coherent_transport() {
    let s = Scenario::preset(ScenarioKind::Fixed);
    let coherent = run_scenario(&s, Configuration::A, &NoiseSpec::uniform(0.0, 2.1).unwrap(), 20.0, 1e-3).unwrap();
    let incoherent = run_scenario(&s, Configuration::B, &NoiseSpec::tied(1.05).unwrap(), 20.0, 1e-3).unwrap();
    for (c, i) in coherent.sink_series().iter().zip(incoherent.sink_series()) {
        assert!(*c >= i, "c {c:e} i {i:e}");
        if *c > 1e-6 {
            assert!(*c > i);
        }
    }
}

#[test]
fn inphase_keeps_zetas_equal() {
    for config in [Configuration::A, Configuration::B] {
        let net = Scenario::preset(ScenarioKind::Inphase).network(config).unwrap();
        for k in 0..200 {
            let t = 0.1 * k as f64;
            assert_eq!(net.zeta1(t), net.zeta2(t));
        }
    }
}

#[test]
fn vanishing_dephasing_gives_no_transport() {
    let net = Scenario::preset(ScenarioKind::Fixed).network(Configuration::B).unwrap();
    assert_eq!(incoherent_efficiency(&net, 0.0, 20.0, 1e-3).unwrap(), 0.0);
    let small = incoherent_efficiency(&net, 1e-3, 20.0, 1e-3).unwrap();
    let smaller = incoherent_efficiency(&net, 1e-4, 20.0, 1e-3).unwrap();
    assert!(smaller < small && small < 1e-3, "{smaller} {small}");
}

#[test]
fn two_point_grid_refines_toward_better_end() {
    let s = Scenario::preset(ScenarioKind::Fixed);
    let params = SweepParams { gamma_min: 1.0, gamma_max: 3.0, n_points: 2, ..SweepParams::default() };
    let r = gamma_sweep(&s, &params).unwrap();
    assert!(r.efficiencies[0] > r.efficiencies[1]);
    assert_eq!(r.grid_best, 0);
    assert!(r.gamma_opt < 2.0, "{}", r.gamma_opt);
    assert!(r.efficiency_opt >= r.efficiencies[0]);
    assert!(r.bracket.1 - r.bracket.0 <= params.resolution);
}

#[test]
fn sweep_is_deterministic() {
    let s = Scenario::preset(ScenarioKind::Antiphase);
    let params = SweepParams { gamma_min: 0.5, gamma_max: 2.5, n_points: 5, t_eval: 8.0, ..SweepParams::default() };
    let a = gamma_sweep(&s, &params).unwrap();
    let b = gamma_sweep(&s, &params).unwrap();
    assert_eq!(a.gamma_opt.to_bits(), b.gamma_opt.to_bits());
    assert_eq!(a.efficiencies, b.efficiencies);
}

#[test]
fn sweeps_are_smooth_and_effective_on_every_preset() {
    let params = SweepParams::default();
    for kind in ScenarioKind::ALL {
        let r = gamma_sweep(&Scenario::preset(kind), &params).unwrap();
        let best = r.efficiencies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(r.efficiency_opt >= best, "{kind}");
        assert!(r.efficiency_opt > 0.1, "{kind}");
        for w in r.efficiencies.windows(2) {
            assert!((w[1] - w[0]).abs() < 0.2, "{kind}: {w:?}");
        }
        let curve_end = r.curve.final_state().sink_population();
        assert!((curve_end - r.efficiency_opt).abs() < 1e-12, "{kind}");
    }
}

#[test]
fn comparison_reports_consistent_record() {
    let params = CompareParams { reoptimize: false, ..CompareParams::default() };
    let cmp = compare_transport(&Scenario::preset(ScenarioKind::Antiphase), &params).unwrap();
    assert_eq!(cmp.gamma_incoherent, 1.05);
    assert_eq!(cmp.coherent.times(), cmp.incoherent.times());
    assert_eq!(cmp.coherent_terminal, *cmp.coherent.sink_series().last().unwrap());
    assert_eq!(cmp.crossover_time, persistent_crossover(cmp.coherent.times(), &cmp.advantage()));
    assert!(cmp.crossover_time.is_some());
}
