mod common;

use common::{max_abs, max_diff, random_state, rng};
use diamond_transport::dynamics::{dephasing_dissipator, master_rhs, sink_dissipator};
use diamond_transport::{
    evolve, run_scenario, sink_efficiency, subspace_population, Configuration, DensityMatrix, NetworkConfig, NoiseSpec,
    Scenario, ScenarioKind, Subspace,
};
use num_complex::Complex64 as C64;

fn coherent_chain() -> NetworkConfig {
    NetworkConfig::diamond(Configuration::A, 1.0, None, None).unwrap()
}

#[test]
fn generators_are_trace_free_and_hermitian() {
    let mut r = rng(7);
    let scenario = Scenario::preset(ScenarioKind::Antiphase);
    for k in 0..20 {
        let rho = random_state(&mut r);
        let noise = NoiseSpec::new(0.3 + 0.1 * k as f64, 1.1, 0.2 * k as f64).unwrap();
        for d in [dephasing_dissipator(rho.matrix(), &noise), sink_dissipator(rho.matrix(), &noise)] {
            assert!(d.trace().norm() < 1e-12);
            assert!(max_abs(&(d - d.adjoint())) < 1e-14);
        }
        let deph = dephasing_dissipator(rho.matrix(), &noise);
        for i in 0..5 {
            assert_eq!(deph[(i, i)], C64::new(0.0, 0.0));
        }
        for config in [Configuration::A, Configuration::B] {
            let net = scenario.network(config).unwrap();
            let rhs = master_rhs(0.9 * k as f64, rho.matrix(), &net, &noise);
            assert!(rhs.trace().norm() < 1e-12);
            assert!(max_abs(&(rhs - rhs.adjoint())) < 1e-12);
        }
    }
}

#[test]
fn pure_commutator_without_noise() {
    let mut r = rng(11);
    let cfg = coherent_chain();
    let quiet = NoiseSpec::new(0.0, 0.0, 0.0).unwrap();
    let rho = random_state(&mut r);
    let h = *diamond_transport::hamiltonian_at(&cfg, 0.0).matrix();
    let expected = (h * rho.matrix() - rho.matrix() * h) * C64::new(0.0, -1.0);
    assert!(max_abs(&(master_rhs(0.0, rho.matrix(), &cfg, &quiet) - expected)) < 1e-15);
}

// With J = 1 the chain |s1>-|s2>-|s3> has coupling sqrt 2 and eigenvalues
// 0, +-2, so the amplitude on site 4 is (cos 2t - 1)/2 = -sin^2 t.
#[test]
fn closed_chain_matches_analytic_law() {
    let quiet = NoiseSpec::new(0.0, 0.0, 0.0).unwrap();
    let traj = evolve(&coherent_chain(), &quiet, &DensityMatrix::localized(1), 2.0 * std::f64::consts::PI, 1e-3).unwrap();
    let p1 = traj.population_series(1);
    let p4 = traj.population_series(4);
    for ((t, a), b) in traj.times().iter().zip(&p1).zip(&p4) {
        assert!((a - t.cos().powi(4)).abs() < 1e-6, "p1 at {t}");
        assert!((b - t.sin().powi(4)).abs() < 1e-6, "p4 at {t}");
    }
}

#[test]
fn dark_subspace_blocks_coherent_transfer() {
    let cfg = NetworkConfig::diamond(Configuration::B, 1.0, None, None).unwrap();
    let noise = NoiseSpec::uniform(0.0, 2.1).unwrap();
    let traj = evolve(&cfg, &noise, &DensityMatrix::localized(1), 50.0, 1e-3).unwrap();
    assert!(traj.sink_series().iter().all(|&p| p.abs() < 1e-9));
    for rho in traj.states() {
        assert!(subspace_population(rho, Subspace::Dark) < 1e-10);
    }

    // Deformations keep the signs, so the dark subspace stays closed.
    let noise = NoiseSpec::uniform(0.0, 2.1).unwrap();
    let traj = run_scenario(&Scenario::preset(ScenarioKind::Site1Osc), Configuration::B, &noise, 20.0, 1e-3).unwrap();
    assert!(traj.sink_series().iter().all(|&p| p.abs() < 1e-9));
}

#[test]
fn invariants_hold_on_every_preset() {
    for kind in ScenarioKind::ALL {
        for (config, noise) in [
            (Configuration::A, NoiseSpec::uniform(0.0, 2.1).unwrap()),
            (Configuration::B, NoiseSpec::tied(1.05).unwrap()),
        ] {
            let traj = run_scenario(&Scenario::preset(kind), config, &noise, 20.0, 1e-3).unwrap();
            let report = traj.diagnostics();
            assert!(report.max_trace_drift < 1e-8, "{kind} {config}: {report:?}");
            assert!(report.max_hermiticity_error < 1e-8, "{kind} {config}: {report:?}");
            assert!(report.min_eigenvalue >= -1e-8, "{kind} {config}: {report:?}");
            assert!(report.max_sink_decrease <= 0.0, "{kind} {config}: {report:?}");

            let eq10 = sink_efficiency(&traj, &noise);
            let direct = traj.final_state().sink_population();
            assert!((eq10.last().unwrap() - direct).abs() < 1e-5, "{kind} {config}");
        }
    }
}

#[test]
fn site_frequency_is_a_global_phase() {
    let scenario = Scenario::preset(ScenarioKind::Antiphase);
    let noise = NoiseSpec::tied(1.05).unwrap();
    for config in [Configuration::A, Configuration::B] {
        let base = scenario.network(config).unwrap();
        let shifted = base.clone().with_omega(7.3).unwrap();
        let a = evolve(&base, &noise, &DensityMatrix::localized(1), 10.0, 1e-3).unwrap();
        let b = evolve(&shifted, &noise, &DensityMatrix::localized(1), 10.0, 1e-3).unwrap();
        for k in 1..=5 {
            assert!(max_diff(&a.population_series(k), &b.population_series(k)) < 1e-9);
        }
    }
}

#[test]
fn rk4_converges_at_fourth_order() {
    // At h = 1e-3 the step-to-step differences sit at rounding level, so the
    // order is measured with coarser steps.
    let net = Scenario::preset(ScenarioKind::Antiphase).network(Configuration::B).unwrap();
    let noise = NoiseSpec::tied(1.05).unwrap();
    let rho0 = DensityMatrix::localized(1);
    let run = |h: f64| *evolve(&net, &noise, &rho0, 10.0, h).unwrap().final_state().matrix();
    let (a, b, c) = (run(0.01), run(0.005), run(0.0025));
    let ratio = max_abs(&(a - b)) / max_abs(&(b - c));
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn trace_drift_stays_tiny_with_random_start() {
    let mut r = rng(3);
    let net = Scenario::preset(ScenarioKind::Inphase).network(Configuration::B).unwrap();
    let noise = NoiseSpec::new(0.4, 1.7, 0.9).unwrap();
    let traj = evolve(&net, &noise, &random_state(&mut r), 5.0, 1e-3).unwrap();
    let report = traj.diagnostics();
    assert!(report.max_trace_drift < 1e-8);
    assert!(report.min_eigenvalue >= -1e-8);
}
