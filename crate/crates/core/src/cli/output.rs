//! CSV and JSON writers.
//!
//! Numbers in CSV files use scientific notation with 12 significant digits,
//! formatted by `std` and so independent of locale. Lines end in LF.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::dynamics::{sink_efficiency, NoiseSpec, Trajectory};

pub const TRAJECTORY_HEADER: &str = "t,p1,p2,p3,p4,psink,total,psink_eq10";

pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

fn push_row(out: &mut String, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(&format_number(*v));
    }
    out.push('\n');
}

pub fn trajectory_csv(traj: &Trajectory, noise: &NoiseSpec) -> String {
    let eq10 = sink_efficiency(traj, noise);
    let mut out = String::with_capacity(traj.len() * 160);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for ((t, rho), p) in traj.times().iter().zip(traj.states()).zip(&eq10) {
        let row = [
            *t,
            rho.population(1),
            rho.population(2),
            rho.population(3),
            rho.population(4),
            rho.sink_population(),
            rho.trace(),
            *p,
        ];
        push_row(&mut out, &row);
    }
    out
}

pub fn columns_csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        push_row(&mut out, &row);
    }
    out
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summary types serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)
}
