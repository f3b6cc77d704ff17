use std::f64::consts::{PI, SQRT_2};

use diamond_transport::netmodel::{to_chain_basis, to_split_basis, DIM, SINK};
use diamond_transport::{coupling_at, hamiltonian_at, Configuration, DeformationSpec, NetworkConfig};
use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn sorted_eigenvalues(m: DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn site_eigenvalues(block: Matrix4<C64>) -> Vec<f64> {
    sorted_eigenvalues(DMatrix::from_column_slice(4, 4, block.as_slice()))
}

#[test]
fn static_spectra() {
    let a = NetworkConfig::diamond(Configuration::A, 1.0, None, None).unwrap();
    let ev = site_eigenvalues(hamiltonian_at(&a, 0.0).site_block());
    for (got, want) in ev.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
        assert!((got - want).abs() < 1e-12, "{ev:?}");
    }

    let b = NetworkConfig::diamond(Configuration::B, 1.0, None, None).unwrap();
    let ev = site_eigenvalues(hamiltonian_at(&b, 0.0).site_block());
    for (got, want) in ev.iter().zip([-SQRT_2, -SQRT_2, SQRT_2, SQRT_2]) {
        assert!((got - want).abs() < 1e-12, "{ev:?}");
    }
}

#[test]
fn split_cross_blocks_vanish_at_random_times() {
    let d1 = DeformationSpec::new(0.25, 1.0, 0.0).unwrap();
    let d2 = DeformationSpec::new(0.25, 1.0, PI).unwrap();
    let cfg = NetworkConfig::diamond(Configuration::B, 1.0, Some(d1), Some(d2)).unwrap();
    for k in 0..20 {
        let t = 0.37 * k as f64 + 0.05 * (k * k) as f64;
        let split = to_split_basis(&hamiltonian_at(&cfg, t)).unwrap();
        assert!(split.cross_block_max() < 1e-12);
    }
}

fn deformation() -> impl Strategy<Value = Option<DeformationSpec>> {
    prop_oneof![
        Just(None),
        (0.0..0.49f64, 0.0..3.0f64, -PI..PI).prop_map(|(a, w, p)| Some(DeformationSpec::new(a, w, p).unwrap())),
    ]
}

fn network() -> impl Strategy<Value = NetworkConfig> {
    (prop_oneof![Just(Configuration::A), Just(Configuration::B)], 0.2..3.0f64, deformation(), deformation(), -5.0..5.0f64)
        .prop_map(|(c, j, d1, d2, w)| NetworkConfig::diamond(c, j, d1, d2).unwrap().with_omega(w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn hamiltonian_structure(cfg in network(), t in 0.0..50.0f64) {
        let h = hamiltonian_at(&cfg, t);
        let m = h.matrix();
        for i in 0..DIM {
            for j in 0..DIM {
                prop_assert!((m[(i, j)] - m[(j, i)].conj()).norm() < 1e-14);
            }
            prop_assert_eq!(m[(SINK, i)], C64::new(0.0, 0.0));
            prop_assert_eq!(m[(i, SINK)], C64::new(0.0, 0.0));
        }
        for k in 0..4 {
            prop_assert_eq!(m[(k, k)].re, cfg.omega());
        }
    }

    #[test]
    fn reduced_forms_preserve_spectrum(cfg in network(), t in 0.0..50.0f64) {
        let h = hamiltonian_at(&cfg, t);
        let full = site_eigenvalues(h.site_block());
        let reduced = match cfg.configuration() {
            Configuration::A => {
                // The chain plus the decoupled (|2> - |3>)/sqrt 2 state at energy omega.
                let chain = to_chain_basis(&h).unwrap();
                let mut ev = sorted_eigenvalues(DMatrix::from_column_slice(3, 3, chain.as_slice()));
                ev.push(cfg.omega());
                ev.sort_by(f64::total_cmp);
                ev
            }
            Configuration::B => {
                let split = to_split_basis(&h).unwrap();
                prop_assert!(split.cross_block_max() < 1e-12);
                let mut ev = sorted_eigenvalues(DMatrix::from_column_slice(2, 2, split.first_block().as_slice()));
                ev.extend(sorted_eigenvalues(DMatrix::from_column_slice(2, 2, split.second_block().as_slice())));
                ev.sort_by(f64::total_cmp);
                ev
            }
        };
        for (a, b) in full.iter().zip(&reduced) {
            prop_assert!((a - b).abs() < 1e-10, "{:?} vs {:?}", full, reduced);
        }
    }

    #[test]
    fn reduced_couplings_are_scaled_zetas(cfg in network(), t in 0.0..50.0f64) {
        let h = hamiltonian_at(&cfg, t);
        let (upper, lower) = match cfg.configuration() {
            Configuration::A => {
                let c = to_chain_basis(&h).unwrap();
                (c[(0, 1)].re, c[(1, 2)].re)
            }
            Configuration::B => {
                let s = to_split_basis(&h).unwrap();
                (s.first_block()[(0, 1)].re, s.second_block()[(0, 1)].re)
            }
        };
        prop_assert!((upper - SQRT_2 * cfg.zeta1(t)).abs() < 1e-10 * upper.abs().max(1.0));
        prop_assert!((lower.abs() - SQRT_2 * cfg.zeta2(t)).abs() < 1e-10 * lower.abs().max(1.0));
    }

    #[test]
    fn coupling_periodic_and_sign_stable(
        a in 0.0..0.45f64, w in 0.05..3.0f64, p in -PI..PI, t in 0.0..30.0f64, base in 0.1..4.0f64,
    ) {
        let d = DeformationSpec::new(a, w, p).unwrap();
        let cfg = NetworkConfig::diamond(Configuration::B, base, Some(d), Some(d)).unwrap();
        let period = 2.0 * PI / w;
        for edge in cfg.edges() {
            let now = coupling_at(edge, t);
            let later = coupling_at(edge, t + period);
            prop_assert!((now - later).abs() <= 1e-12 * now.abs().max(1.0), "{} vs {}", now, later);
            prop_assert_eq!(now.signum(), edge.sign().value());
        }
    }

    #[test]
    fn paired_edges_track_each_other(cfg in network(), t in 0.0..50.0f64) {
        let e = cfg.edges();
        prop_assert_eq!(coupling_at(&e[0], t).abs(), coupling_at(&e[1], t).abs());
        prop_assert_eq!(coupling_at(&e[2], t).abs(), coupling_at(&e[3], t).abs());
    }
}
