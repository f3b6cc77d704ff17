//! Lindblad evolution of the five-level density matrix.
//!
//! The generator is
//!
//! ```text
//! d rho/dt = -i [H(t), rho]
//!          + sum_{i=2,3} gamma_i (2 n_i rho n_i - {n_i, rho})
//!          + Gamma (2 L rho L^+ - {L^+ L, rho}),      L = |sink><4|
//! ```
//!
//! with `n_i = |i><i|`. Note the factor 2 inside both dissipators: the sink
//! fills at the instantaneous rate `2 Gamma rho_44`.
//!
//! Integration is fixed-step classical RK4 with the Hamiltonian sampled at
//! the stage times, followed by re-symmetrisation of the state after every
//! step.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::netmodel::{hamiltonian_at, split_unitary, Matrix5c, NetworkConfig, DIM, SINK};

/// Tolerance used when accepting user-supplied states.
pub const STATE_TOL: f64 = 1e-8;
/// Drift beyond which `evolve` gives up.
pub const BREACH_TOL: f64 = 1e-6;
/// Default RK4 step, in units of `1/J0`.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("final time must be non-negative and finite, got {0}")]
    Horizon(f64),
    #[error("rates must be non-negative and finite (gamma2 = {gamma2}, gamma3 = {gamma3}, Gamma = {sink_rate})")]
    Rates { gamma2: f64, gamma3: f64, sink_rate: f64 },
    #[error("not a valid density matrix: {0}")]
    State(String),
    #[error("{kind} breached at t = {time}: {value:e}")]
    InvariantBreach { time: f64, kind: BreachKind, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BreachKind {
    TraceDrift,
    Negativity,
}

impl std::fmt::Display for BreachKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BreachKind::TraceDrift => "trace drift",
            BreachKind::Negativity => "negativity",
        })
    }
}

/// A state over `{|1>, |2>, |3>, |4>, |sink>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix5c);

impl DensityMatrix {
    /// Excitation localised on `site` (1..=4), or on the sink for `site == 5`.
    pub fn localized(site: usize) -> Self {
        assert!((1..=DIM).contains(&site), "site {site} outside 1..=5");
        let mut m = Matrix5c::zeros();
        m[(site - 1, site - 1)] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// Checks Hermiticity, unit trace and positivity within [`STATE_TOL`].
    pub fn new(m: Matrix5c) -> Result<Self, DynamicsError> {
        let rho = Self(m);
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(DynamicsError::State("non-finite entry".into()));
        }
        let herm = rho.hermiticity_error();
        if herm > STATE_TOL {
            return Err(DynamicsError::State(format!("not Hermitian (deviation {herm:e})")));
        }
        let drift = (rho.trace() - 1.0).abs();
        if drift > STATE_TOL {
            return Err(DynamicsError::State(format!("trace off by {drift:e}")));
        }
        let min = rho.min_eigenvalue();
        if min < -STATE_TOL {
            return Err(DynamicsError::State(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix5c) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix5c {
        &self.0
    }

    /// Population of basis state `k`, 1-based with 5 the sink.
    pub fn population(&self, k: usize) -> f64 {
        self.0[(k - 1, k - 1)].re
    }

    pub fn sink_population(&self) -> f64 {
        self.0[(SINK, SINK)].re
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.0;
        let mut worst = 0.0f64;
        for i in 0..DIM {
            for j in i..DIM {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().min()
    }

    fn symmetrize(&mut self) {
        self.0 = (self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
    }
}

/// Dephasing on sites 2 and 3 plus the sink channel out of site 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseSpec {
    gamma2: f64,
    gamma3: f64,
    sink_rate: f64,
}

impl NoiseSpec {
    pub fn new(gamma2: f64, gamma3: f64, sink_rate: f64) -> Result<Self, DynamicsError> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if ok(gamma2) && ok(gamma3) && ok(sink_rate) {
            Ok(Self { gamma2, gamma3, sink_rate })
        } else {
            Err(DynamicsError::Rates { gamma2, gamma3, sink_rate })
        }
    }

    /// Equal dephasing `gamma` on both middle sites.
    pub fn uniform(gamma: f64, sink_rate: f64) -> Result<Self, DynamicsError> {
        Self::new(gamma, gamma, sink_rate)
    }

    /// Equal dephasing with the sink rate tied to `2 gamma`.
    pub fn tied(gamma: f64) -> Result<Self, DynamicsError> {
        Self::new(gamma, gamma, 2.0 * gamma)
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma3(&self) -> f64 {
        self.gamma3
    }

    pub fn sink_rate(&self) -> f64 {
        self.sink_rate
    }
}

pub fn dephasing_dissipator(rho: &Matrix5c, noise: &NoiseSpec) -> Matrix5c {
    // 2 n rho n - {n, rho} with n = |i><i| removes row i and column i of rho
    // except the diagonal entry, which cancels.
    let mut out = Matrix5c::zeros();
    for (i, gamma) in [(1, noise.gamma2), (2, noise.gamma3)] {
        if gamma == 0.0 {
            continue;
        }
        for k in 0..DIM {
            if k != i {
                out[(i, k)] -= rho[(i, k)] * gamma;
                out[(k, i)] -= rho[(k, i)] * gamma;
            }
        }
    }
    out
}

pub fn sink_dissipator(rho: &Matrix5c, noise: &NoiseSpec) -> Matrix5c {
    const SOURCE: usize = 3;
    let rate = noise.sink_rate;
    let mut out = Matrix5c::zeros();
    if rate == 0.0 {
        return out;
    }
    // 2 L rho L^+ = 2 rho_44 |sink><sink|;  {L^+ L, rho} = {|4><4|, rho}.
    out[(SINK, SINK)] += rho[(SOURCE, SOURCE)] * (2.0 * rate);
    for k in 0..DIM {
        out[(SOURCE, k)] -= rho[(SOURCE, k)] * rate;
        out[(k, SOURCE)] -= rho[(k, SOURCE)] * rate;
    }
    out
}

pub fn master_rhs(t: f64, rho: &Matrix5c, config: &NetworkConfig, noise: &NoiseSpec) -> Matrix5c {
    let h = hamiltonian_at(config, t);
    let h = h.matrix();
    let commutator = h * rho - rho * h;
    commutator * C64::new(0.0, -1.0) + dephasing_dissipator(rho, noise) + sink_dissipator(rho, noise)
}

fn rk4_step(t: f64, h: f64, rho: &Matrix5c, config: &NetworkConfig, noise: &NoiseSpec) -> Matrix5c {
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let k1 = master_rhs(t, rho, config, noise);
    let k2 = master_rhs(t + 0.5 * h, &(rho + k1 * half), config, noise);
    let k3 = master_rhs(t + 0.5 * h, &(rho + k2 * half), config, noise);
    let k4 = master_rhs(t + h, &(rho + k3 * full), config, noise);
    let two = C64::new(2.0, 0.0);
    rho + (k1 + k2 * two + k3 * two + k4) * C64::new(h / 6.0, 0.0)
}

/// Uniform grid on `[0, t_max]` whose spacing is the largest value not
/// exceeding `step` that divides `t_max` exactly.
pub(crate) fn time_grid(t_max: f64, step: f64) -> Result<(usize, f64), DynamicsError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(DynamicsError::Step(step));
    }
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(DynamicsError::Horizon(t_max));
    }
    if t_max == 0.0 {
        return Ok((0, step));
    }
    let n = ((t_max / step) - 1e-9).ceil().max(1.0) as usize;
    Ok((n, t_max / n as f64))
}

fn check_snapshot(time: f64, rho: &DensityMatrix) -> Result<(), DynamicsError> {
    let drift = (rho.trace() - 1.0).abs();
    if drift.is_nan() || drift > BREACH_TOL {
        return Err(DynamicsError::InvariantBreach { time, kind: BreachKind::TraceDrift, value: drift });
    }
    let min = rho.min_eigenvalue();
    if min.is_nan() || min < -BREACH_TOL {
        return Err(DynamicsError::InvariantBreach { time, kind: BreachKind::Negativity, value: min });
    }
    Ok(())
}

/// Time series of states on a uniform grid starting at `t = 0`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    step: f64,
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub(crate) fn from_parts(step: f64, times: Vec<f64>, states: Vec<DensityMatrix>) -> Self {
        debug_assert_eq!(times.len(), states.len());
        Self { step, times, states }
    }

    /// Grid spacing actually used.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least the initial state")
    }

    /// Population series of basis state `k` (1..=4 sites, 5 sink).
    pub fn population_series(&self, k: usize) -> Vec<f64> {
        self.states.iter().map(|r| r.population(k)).collect()
    }

    pub fn sink_series(&self) -> Vec<f64> {
        self.states.iter().map(DensityMatrix::sink_population).collect()
    }

    pub fn total_series(&self) -> Vec<f64> {
        self.states.iter().map(DensityMatrix::trace).collect()
    }

    pub fn diagnostics(&self) -> InvariantReport {
        let mut report = InvariantReport {
            max_trace_drift: 0.0,
            max_hermiticity_error: 0.0,
            min_eigenvalue: f64::INFINITY,
            max_sink_decrease: 0.0,
        };
        let mut previous_sink = f64::NEG_INFINITY;
        for rho in &self.states {
            report.max_trace_drift = report.max_trace_drift.max((rho.trace() - 1.0).abs());
            report.max_hermiticity_error = report.max_hermiticity_error.max(rho.hermiticity_error());
            report.min_eigenvalue = report.min_eigenvalue.min(rho.min_eigenvalue());
            let sink = rho.sink_population();
            report.max_sink_decrease = report.max_sink_decrease.max(previous_sink - sink);
            previous_sink = sink;
        }
        report
    }
}

/// Worst-case invariant violations along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantReport {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
    /// Largest step-to-step drop of the sink population (0 when monotone).
    pub max_sink_decrease: f64,
}

fn validate_inputs(rho0: &DensityMatrix, t_max: f64, step: f64) -> Result<(usize, f64), DynamicsError> {
    let grid = time_grid(t_max, step)?;
    DensityMatrix::new(*rho0.matrix())?;
    Ok(grid)
}

/// Propagates `rho0` to `t_max`, storing every step.
pub fn evolve(
    config: &NetworkConfig,
    noise: &NoiseSpec,
    rho0: &DensityMatrix,
    t_max: f64,
    step: f64,
) -> Result<Trajectory, DynamicsError> {
    let (n, h) = validate_inputs(rho0, t_max, step)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    times.push(0.0);
    states.push(*rho0);
    let mut rho = *rho0;
    for k in 0..n {
        let t = k as f64 * h;
        rho = DensityMatrix(rk4_step(t, h, &rho.0, config, noise));
        rho.symmetrize();
        let t_next = (k + 1) as f64 * h;
        check_snapshot(t_next, &rho)?;
        times.push(t_next);
        states.push(rho);
    }
    Ok(Trajectory::from_parts(h, times, states))
}

/// Same propagation as [`evolve`] but keeps only the final state.
pub fn evolve_final(
    config: &NetworkConfig,
    noise: &NoiseSpec,
    rho0: &DensityMatrix,
    t_max: f64,
    step: f64,
) -> Result<DensityMatrix, DynamicsError> {
    let (n, h) = validate_inputs(rho0, t_max, step)?;
    let mut rho = *rho0;
    for k in 0..n {
        rho = DensityMatrix(rk4_step(k as f64 * h, h, &rho.0, config, noise));
        rho.symmetrize();
    }
    check_snapshot(n as f64 * h, &rho)?;
    Ok(rho)
}

/// Sink efficiency `2 Gamma * int_0^t rho_44` by trapezoidal quadrature on
/// the trajectory grid. Independent of the sink population tracked in the
/// state, which it should reproduce.
pub fn sink_efficiency(traj: &Trajectory, noise: &NoiseSpec) -> Vec<f64> {
    let rate = 2.0 * noise.sink_rate;
    let source = traj.population_series(4);
    let mut out = Vec::with_capacity(source.len());
    let mut acc = 0.0;
    out.push(0.0);
    for (w, dt) in source.windows(2).zip(traj.times.windows(2)) {
        acc += 0.5 * (w[0] + w[1]) * (dt[1] - dt[0]);
        out.push(rate * acc);
    }
    out.truncate(source.len());
    out
}

/// The two invariant subspaces of the configuration-B Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subspace {
    /// `span{|1>, (|2> + |3>)/sqrt 2}`, which contains the initial state.
    Bright,
    /// `span{(|2> - |3>)/sqrt 2, |4>}`, the only part coupled to the sink.
    Dark,
}

/// `tr(P rho P)` for the projector onto `which`.
pub fn subspace_population(rho: &DensityMatrix, which: Subspace) -> f64 {
    let u: Matrix4<C64> = split_unitary();
    let columns = match which {
        Subspace::Bright => [0, 1],
        Subspace::Dark => [2, 3],
    };
    let block = rho.0.fixed_view::<4, 4>(0, 0);
    columns
        .iter()
        .map(|&c| {
            let v: Vector4<C64> = u.column(c).into_owned();
            (v.adjoint() * block * v)[(0, 0)].re
        })
        .sum()
}
