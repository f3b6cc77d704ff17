use std::ffi::{CStr, CString};
use std::ptr;

use diamond_transport_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dt_last_error()) }.to_string_lossy().into_owned()
}

fn simulate(name: &str, config: u32, gamma: f64, sink: f64, t_max: f64, step: f64) -> (DtStatus, *mut DtTrajectory) {
    let name = CString::new(name).unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { dt_simulate(name.as_ptr(), config, gamma, sink, t_max, step, &mut handle) };
    (status, handle)
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(dt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn trajectory_round_trip() {
    let (status, traj) = simulate("fixed", DT_CONFIG_B, 1.05, 2.1, 5.0, 1e-3);
    assert_eq!(status, DtStatus::Ok);
    let n = unsafe { dt_trajectory_len(traj) };
    assert_eq!(n, 5001);

    let mut total = vec![0.0; n];
    for site in 1..=5 {
        let mut series = vec![0.0; n];
        assert_eq!(unsafe { dt_trajectory_copy_series(traj, site, series.as_mut_ptr(), n) }, DtStatus::Ok);
        total.iter_mut().zip(&series).for_each(|(t, p)| *t += p);
    }
    assert!(total.iter().all(|t| (t - 1.0).abs() < 1e-8));

    let (mut t, mut p) = (0.0, 0.0);
    assert_eq!(unsafe { dt_trajectory_sample(traj, 0, 1, &mut t, &mut p) }, DtStatus::Ok);
    assert_eq!((t, p), (0.0, 1.0));
    assert_eq!(unsafe { dt_trajectory_sample(traj, n - 1, 5, &mut t, &mut p) }, DtStatus::Ok);
    assert!((t - 5.0).abs() < 1e-12 && p > 0.0);

    assert_eq!(unsafe { dt_trajectory_sample(traj, n, 1, &mut t, &mut p) }, DtStatus::OutOfRange);
    assert_eq!(unsafe { dt_trajectory_sample(traj, 0, 6, &mut t, &mut p) }, DtStatus::OutOfRange);
    let mut short = [0.0; 3];
    assert_eq!(unsafe { dt_trajectory_copy_series(traj, 1, short.as_mut_ptr(), 3) }, DtStatus::OutOfRange);
    unsafe { dt_trajectory_free(traj) };
}

#[test]
fn invalid_arguments_report_messages() {
    let (status, traj) = simulate("wobble", DT_CONFIG_A, 0.0, 2.1, 1.0, 1e-3);
    assert_eq!(status, DtStatus::InvalidArgument);
    assert!(traj.is_null());
    assert!(last_error().contains("wobble"));

    assert_eq!(simulate("fixed", 7, 0.0, 2.1, 1.0, 1e-3).0, DtStatus::InvalidArgument);
    assert!(last_error().contains("configuration 7"));
    assert_eq!(simulate("fixed", DT_CONFIG_B, -1.0, 2.1, 1.0, 1e-3).0, DtStatus::InvalidArgument);
    assert_eq!(simulate("fixed", DT_CONFIG_B, 1.0, 2.0, 1.0, 0.0).0, DtStatus::InvalidArgument);

    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { dt_simulate(ptr::null(), 0, 0.0, 0.0, 1.0, 1e-3, &mut handle) }, DtStatus::NullPointer);
    let name = CString::new("fixed").unwrap();
    assert_eq!(unsafe { dt_simulate(name.as_ptr(), 0, 0.0, 0.0, 1.0, 1e-3, ptr::null_mut()) }, DtStatus::NullPointer);
    assert_eq!(unsafe { dt_trajectory_len(ptr::null()) }, 0);
    unsafe { dt_trajectory_free(ptr::null_mut()) };
}

#[test]
fn unstable_step_reports_breach() {
    let (status, traj) = simulate("fixed", DT_CONFIG_B, 50.0, 100.0, 5.0, 1.0);
    assert_eq!(status, DtStatus::InvariantBreach);
    assert!(traj.is_null());
    assert!(last_error().contains("breached"), "{}", last_error());
}

#[test]
fn coupling_follows_inverse_cube() {
    let mut j = 0.0;
    assert_eq!(unsafe { dt_coupling_at(1.0, 0.25, 1.0, 0.0, 0.0, &mut j) }, DtStatus::Ok);
    assert!((j - 1.0).abs() < 1e-15);
    let quarter = std::f64::consts::FRAC_PI_2;
    assert_eq!(unsafe { dt_coupling_at(1.0, 0.25, 1.0, 0.0, quarter, &mut j) }, DtStatus::Ok);
    assert!((j - 8.0).abs() < 1e-12, "{j}");
    assert_eq!(unsafe { dt_coupling_at(1.0, 0.5, 1.0, 0.0, 0.0, &mut j) }, DtStatus::InvalidArgument);
    assert_eq!(unsafe { dt_coupling_at(1.0, 0.1, 1.0, 0.0, 0.0, ptr::null_mut()) }, DtStatus::NullPointer);
}

#[test]
fn sweep_handle_exposes_grid_and_optimum() {
    let name = CString::new("fixed").unwrap();
    let mut sweep = ptr::null_mut();
    let status = unsafe { dt_sweep(name.as_ptr(), 0.5, 1.5, 6, 10.0, 1e-3, 0.05, &mut sweep) };
    assert_eq!(status, DtStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { dt_sweep_len(sweep) }, 6);
    let (mut g, mut e) = (0.0, 0.0);
    let mut best = 0.0f64;
    for k in 0..6 {
        assert_eq!(unsafe { dt_sweep_point(sweep, k, &mut g, &mut e) }, DtStatus::Ok);
        assert!((g - (0.5 + 0.2 * k as f64)).abs() < 1e-12);
        best = best.max(e);
    }
    assert_eq!(unsafe { dt_sweep_point(sweep, 6, &mut g, &mut e) }, DtStatus::OutOfRange);
    assert_eq!(unsafe { dt_sweep_optimum(sweep, &mut g, &mut e) }, DtStatus::Ok);
    assert!(e >= best && (0.5..=1.5).contains(&g));
    unsafe { dt_sweep_free(sweep) };

    let status = unsafe { dt_sweep(name.as_ptr(), 0.5, 1.5, 1, 10.0, 1e-3, 0.05, &mut sweep) };
    assert_eq!(status, DtStatus::InvalidArgument);
    assert!(sweep.is_null());
}
