//! Brute-force reference propagator.
//!
//! The master equation is rewritten as a linear ODE on the column-stacked
//! density matrix, `d vec(rho)/dt = L(t) vec(rho)`, with the 25x25
//! Liouvillian assembled from Kronecker products. Time stepping freezes
//! `L` at each step midpoint and applies its exact exponential. Nothing
//! here shares code with the RK4 right-hand side, so agreement between the
//! two is a meaningful check.

use nalgebra::SMatrix;
use num_complex::Complex64 as C64;

use crate::dynamics::{time_grid, DensityMatrix, DynamicsError, NoiseSpec, Trajectory};
use crate::netmodel::{hamiltonian_at, Matrix5c, NetworkConfig, DIM, SINK};

pub const SUPER_DIM: usize = DIM * DIM;

pub type SuperMatrix = SMatrix<C64, SUPER_DIM, SUPER_DIM>;
pub type SuperVector = SMatrix<C64, SUPER_DIM, 1>;

/// Column-stacking vectorisation: `vec(rho)[i + DIM * j] = rho[i, j]`.
pub fn vectorize(rho: &Matrix5c) -> SuperVector {
    // nalgebra storage is column-major, so the raw slice is already stacked.
    SuperVector::from_column_slice(rho.as_slice())
}

pub fn unvectorize(v: &SuperVector) -> Matrix5c {
    Matrix5c::from_column_slice(v.as_slice())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianMatrix(SuperMatrix);

impl LiouvillianMatrix {
    pub fn matrix(&self) -> &SuperMatrix {
        &self.0
    }

    pub fn apply(&self, rho: &Matrix5c) -> Matrix5c {
        unvectorize(&(self.0 * vectorize(rho)))
    }
}

fn identity() -> Matrix5c {
    Matrix5c::identity()
}

/// `rate (2 A rho A^+ - A^+A rho - rho A^+A)` as a supermatrix.
fn dissipator_super(a: &Matrix5c, rate: f64) -> SuperMatrix {
    let ada = a.adjoint() * a;
    let jump = a.conjugate().kronecker(a) * C64::new(2.0, 0.0);
    let anti = identity().kronecker(&ada) + ada.transpose().kronecker(&identity());
    (jump - anti) * C64::new(rate, 0.0)
}

fn site_projector(k: usize) -> Matrix5c {
    let mut p = Matrix5c::zeros();
    p[(k, k)] = C64::new(1.0, 0.0);
    p
}

pub fn assemble_liouvillian(config: &NetworkConfig, noise: &NoiseSpec, t: f64) -> LiouvillianMatrix {
    let h = *hamiltonian_at(config, t).matrix();
    // vec(H rho - rho H) = (I (x) H - H^T (x) I) vec(rho)
    let commutator = identity().kronecker(&h) - h.transpose().kronecker(&identity());
    let mut l = commutator * C64::new(0.0, -1.0);
    l += dissipator_super(&site_projector(1), noise.gamma2());
    l += dissipator_super(&site_projector(2), noise.gamma3());
    let mut sink_jump = Matrix5c::zeros();
    sink_jump[(SINK, 3)] = C64::new(1.0, 0.0);
    l += dissipator_super(&sink_jump, noise.sink_rate());
    LiouvillianMatrix(l)
}

fn one_norm<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor
/// series. The argument is scaled until its 1-norm is at most 1/2, and the
/// series is summed until a term drops below `1e-17` relative to the
/// partial sum, which keeps the result accurate to a few ulps times the
/// squaring count.
pub fn expm<const N: usize>(a: &SMatrix<C64, N, N>) -> SMatrix<C64, N, N> {
    let norm = one_norm(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a * C64::new(0.5f64.powi(squarings), 0.0);

    let mut sum = SMatrix::<C64, N, N>::identity();
    let mut term = SMatrix::<C64, N, N>::identity();
    for k in 1..=40 {
        term = (term * scaled) * C64::new(1.0 / k as f64, 0.0);
        sum += term;
        if one_norm(&term) <= 1e-17 * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Piecewise-exponential propagation with the Liouvillian frozen at each
/// step midpoint. Static networks reuse a single exponential.
pub fn propagate_exponential(
    config: &NetworkConfig,
    noise: &NoiseSpec,
    rho0: &DensityMatrix,
    t_max: f64,
    step: f64,
) -> Result<Trajectory, DynamicsError> {
    let (n, h) = time_grid(t_max, step)?;
    DensityMatrix::new(*rho0.matrix())?;
    let step_propagator = |t_mid: f64| {
        let l = assemble_liouvillian(config, noise, t_mid);
        expm(&(l.0 * C64::new(h, 0.0)))
    };
    let frozen = config.is_static().then(|| step_propagator(0.0));

    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    times.push(0.0);
    states.push(*rho0);
    let mut v = vectorize(rho0.matrix());
    for k in 0..n {
        let propagator = match &frozen {
            Some(p) => *p,
            None => step_propagator((k as f64 + 0.5) * h),
        };
        v = propagator * v;
        times.push((k + 1) as f64 * h);
        states.push(DensityMatrix::from_matrix_unchecked(unvectorize(&v)));
    }
    Ok(Trajectory::from_parts(h, times, states))
}
