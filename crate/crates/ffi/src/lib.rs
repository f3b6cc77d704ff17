//! C ABI over the simulator.
//!
//! Results live behind opaque handles that the caller releases with the
//! matching `*_free` function. Every fallible call returns a [`DtStatus`];
//! on failure [`dt_last_error`] describes what went wrong on the calling
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use diamond_transport::analysis::AnalysisError;
use diamond_transport::netmodel::Edge;
use diamond_transport::{
    coupling_at, gamma_sweep, run_scenario, Configuration, DeformationSpec, DynamicsError, NoiseSpec, Scenario,
    ScenarioKind, Sign, SweepParams, SweepResult, Trajectory,
};

/// Selects configuration A (all couplings positive).
pub const DT_CONFIG_A: u32 = 0;
/// Selects configuration B (one negative coupling).
pub const DT_CONFIG_B: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvariantBreach = 3,
    OutOfRange = 4,
    Panic = 5,
}

/// Sampled density-matrix evolution.
pub struct DtTrajectory {
    inner: Trajectory,
}

/// Efficiency grid and refined optimum of a dephasing sweep.
pub struct DtSweep {
    inner: SweepResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(status: DtStatus, message: impl Into<String>) -> DtStatus {
    set_error(message);
    status
}

fn from_analysis(err: AnalysisError) -> DtStatus {
    let status = match err {
        AnalysisError::Dynamics(DynamicsError::InvariantBreach { .. }) => DtStatus::InvariantBreach,
        _ => DtStatus::InvalidArgument,
    };
    fail(status, err.to_string())
}

/// Runs `body` with panics turned into [`DtStatus::Panic`].
fn guarded(body: impl FnOnce() -> DtStatus) -> DtStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| fail(DtStatus::Panic, "internal panic"))
}

unsafe fn scenario_from(name: *const c_char) -> Result<Scenario, DtStatus> {
    if name.is_null() {
        return Err(fail(DtStatus::NullPointer, "scenario name is null"));
    }
    let text = CStr::from_ptr(name)
        .to_str()
        .map_err(|_| fail(DtStatus::InvalidArgument, "scenario name is not UTF-8"))?;
    text.parse::<ScenarioKind>()
        .map(Scenario::preset)
        .map_err(|e| fail(DtStatus::InvalidArgument, e.to_string()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Coupling strength of a `+` edge with base coupling `base` whose sites
/// oscillate with amplitude `amplitude`, angular frequency `omega0` and
/// phase `phase`, evaluated at time `t`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn dt_coupling_at(
    base: f64,
    amplitude: f64,
    omega0: f64,
    phase: f64,
    t: f64,
    out: *mut f64,
) -> DtStatus {
    guarded(|| {
        if out.is_null() {
            return fail(DtStatus::NullPointer, "output pointer is null");
        }
        let edge = DeformationSpec::new(amplitude, omega0, phase)
            .and_then(|d| Edge::new(1, 2, Sign::Plus, base, Some(d)));
        match edge {
            Ok(edge) => {
                *out = coupling_at(&edge, t);
                DtStatus::Ok
            }
            Err(e) => fail(DtStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Evolves a preset scenario from an excitation on site 1.
///
/// # Safety
/// `scenario` must be null or a NUL-terminated string; `out` must be null or
/// point to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dt_simulate(
    scenario: *const c_char,
    configuration: u32,
    gamma: f64,
    sink_rate: f64,
    t_max: f64,
    step: f64,
    out: *mut *mut DtTrajectory,
) -> DtStatus {
    guarded(|| {
        if out.is_null() {
            return fail(DtStatus::NullPointer, "output pointer is null");
        }
        *out = ptr::null_mut();
        let scenario = match scenario_from(scenario) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let configuration = match configuration {
            DT_CONFIG_A => Configuration::A,
            DT_CONFIG_B => Configuration::B,
            other => return fail(DtStatus::InvalidArgument, format!("unknown configuration {other}")),
        };
        let noise = match NoiseSpec::uniform(gamma, sink_rate) {
            Ok(n) => n,
            Err(e) => return fail(DtStatus::InvalidArgument, e.to_string()),
        };
        match run_scenario(&scenario, configuration, &noise, t_max, step) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(DtTrajectory { inner }));
                DtStatus::Ok
            }
            Err(e) => from_analysis(e),
        }
    })
}

/// Number of samples, including `t = 0`. Zero for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle from [`dt_simulate`].
#[no_mangle]
pub unsafe extern "C" fn dt_trajectory_len(traj: *const DtTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.len())
}

/// Time and population of `site` (1 to 4, or 5 for the sink) at sample
/// `index`.
///
/// # Safety
/// `traj` must be null or a live handle; `time` and `population` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn dt_trajectory_sample(
    traj: *const DtTrajectory,
    index: usize,
    site: u32,
    time: *mut f64,
    population: *mut f64,
) -> DtStatus {
    guarded(|| {
        let Some(traj) = traj.as_ref() else {
            return fail(DtStatus::NullPointer, "trajectory handle is null");
        };
        if time.is_null() || population.is_null() {
            return fail(DtStatus::NullPointer, "output pointer is null");
        }
        if !(1..=5).contains(&site) {
            return fail(DtStatus::OutOfRange, format!("site {site} outside 1..=5"));
        }
        let Some(rho) = traj.inner.states().get(index) else {
            return fail(DtStatus::OutOfRange, format!("sample {index} of {}", traj.inner.len()));
        };
        *time = traj.inner.times()[index];
        *population = rho.population(site as usize);
        DtStatus::Ok
    })
}

/// Copies the population series of `site` into `buffer`, which must hold
/// exactly [`dt_trajectory_len`] values.
///
/// # Safety
/// `buffer` must be null or writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn dt_trajectory_copy_series(
    traj: *const DtTrajectory,
    site: u32,
    buffer: *mut f64,
    capacity: usize,
) -> DtStatus {
    guarded(|| {
        let Some(traj) = traj.as_ref() else {
            return fail(DtStatus::NullPointer, "trajectory handle is null");
        };
        if buffer.is_null() {
            return fail(DtStatus::NullPointer, "buffer is null");
        }
        if !(1..=5).contains(&site) {
            return fail(DtStatus::OutOfRange, format!("site {site} outside 1..=5"));
        }
        if capacity != traj.inner.len() {
            return fail(DtStatus::OutOfRange, format!("capacity {capacity}, need {}", traj.inner.len()));
        }
        let series = traj.inner.population_series(site as usize);
        ptr::copy_nonoverlapping(series.as_ptr(), buffer, series.len());
        DtStatus::Ok
    })
}

/// Releases a trajectory. Null is ignored.
///
/// # Safety
/// `traj` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_trajectory_free(traj: *mut DtTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Scans dephasing rates on an evenly spaced grid for configuration B with
/// the sink rate tied to twice the dephasing rate, then refines the best
/// point to `resolution`.
///
/// # Safety
/// `scenario` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn dt_sweep(
    scenario: *const c_char,
    gamma_min: f64,
    gamma_max: f64,
    n_points: usize,
    t_eval: f64,
    step: f64,
    resolution: f64,
    out: *mut *mut DtSweep,
) -> DtStatus {
    guarded(|| {
        if out.is_null() {
            return fail(DtStatus::NullPointer, "output pointer is null");
        }
        *out = ptr::null_mut();
        let scenario = match scenario_from(scenario) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let params = SweepParams { gamma_min, gamma_max, n_points, t_eval, step, resolution };
        match gamma_sweep(&scenario, &params) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(DtSweep { inner }));
                DtStatus::Ok
            }
            Err(e) => from_analysis(e),
        }
    })
}

/// Number of grid points. Zero for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle from [`dt_sweep`].
#[no_mangle]
pub unsafe extern "C" fn dt_sweep_len(sweep: *const DtSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.inner.gammas.len())
}

/// Dephasing rate and efficiency at grid point `index`.
///
/// # Safety
/// `sweep` must be null or a live handle; outputs must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dt_sweep_point(
    sweep: *const DtSweep,
    index: usize,
    gamma: *mut f64,
    efficiency: *mut f64,
) -> DtStatus {
    guarded(|| {
        let Some(sweep) = sweep.as_ref() else {
            return fail(DtStatus::NullPointer, "sweep handle is null");
        };
        if gamma.is_null() || efficiency.is_null() {
            return fail(DtStatus::NullPointer, "output pointer is null");
        }
        match (sweep.inner.gammas.get(index), sweep.inner.efficiencies.get(index)) {
            (Some(g), Some(e)) => {
                *gamma = *g;
                *efficiency = *e;
                DtStatus::Ok
            }
            _ => fail(DtStatus::OutOfRange, format!("point {index} of {}", sweep.inner.gammas.len())),
        }
    })
}

/// Refined optimal dephasing rate and its efficiency.
///
/// # Safety
/// `sweep` must be null or a live handle; outputs must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dt_sweep_optimum(sweep: *const DtSweep, gamma: *mut f64, efficiency: *mut f64) -> DtStatus {
    guarded(|| {
        let Some(sweep) = sweep.as_ref() else {
            return fail(DtStatus::NullPointer, "sweep handle is null");
        };
        if gamma.is_null() || efficiency.is_null() {
            return fail(DtStatus::NullPointer, "output pointer is null");
        }
        *gamma = sweep.inner.gamma_opt;
        *efficiency = sweep.inner.efficiency_opt;
        DtStatus::Ok
    })
}

/// Releases a sweep. Null is ignored.
///
/// # Safety
/// `sweep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_sweep_free(sweep: *mut DtSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}
