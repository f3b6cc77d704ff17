#![allow(dead_code)]

use diamond_transport::netmodel::{Matrix5c, DIM};
use diamond_transport::DensityMatrix;
use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `G G^+ / tr(G G^+)` for a random complex `G`: Hermitian, positive, unit trace.
pub fn random_state(rng: &mut StdRng) -> DensityMatrix {
    let g = Matrix5c::from_fn(|_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).expect("valid by construction")
}

/// Random Hermitian matrix without trace or positivity constraints.
pub fn random_hermitian(rng: &mut StdRng) -> Matrix5c {
    let g = Matrix5c::from_fn(|_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (g + g.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_abs(m: &Matrix5c) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub const SITES: usize = DIM;
