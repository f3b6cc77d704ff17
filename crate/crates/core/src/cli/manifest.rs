//! Run manifests.
//!
//! A manifest document is flat `key = value` text. `#` starts a comment,
//! blank lines are ignored, and every key may appear at most once. Unknown
//! keys are an error so that a typo never silently falls back to a
//! default.
//!
//! | key                | meaning                                          | default          |
//! |--------------------|--------------------------------------------------|------------------|
//! | `scenario`         | deformation preset for `simulate` and `sweep`    | `fixed`          |
//! | `scenarios`        | comma-separated presets for `compare`            | all five         |
//! | `config`           | sign pattern, `A` or `B`                         | `B`              |
//! | `gamma`            | dephasing rate on sites 2 and 3                  | 1.05 (B), 0 (A)  |
//! | `Gamma`            | sink rate                                        | 2.1              |
//! | `a`                | deformation amplitude                            | 0.25             |
//! | `omega0`           | deformation angular frequency                    | 1                |
//! | `phase1`, `phase2` | phases of the (1,2)/(1,3) and (2,4)/(3,4) pairs  | preset           |
//! | `omega`            | common site frequency                            | 0                |
//! | `tmax`             | final time                                       | 20               |
//! | `h`                | integration step                                 | 0.001            |
//! | `Teval`            | efficiency evaluation time for sweeps            | 20               |
//! | `gamma_min`        | sweep lower bound                                | 0.2              |
//! | `gamma_max`        | sweep upper bound                                | 3.0              |
//! | `n_points`         | sweep grid size                                  | 29               |
//! | `reoptimize_gamma` | re-optimise gamma per scenario in `compare`      | `true`           |
//! | `out`              | output directory                                 | `.`              |

use std::path::PathBuf;

use serde::Serialize;

use crate::analysis::{
    CompareParams, Scenario, ScenarioKind, SweepParams, COHERENT_SINK_RATE, DEFAULT_AMPLITUDE, DEFAULT_OMEGA0,
    DEFAULT_T_EVAL, REFERENCE_GAMMA,
};
use crate::dynamics::DEFAULT_STEP;
use crate::netmodel::Configuration;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ManifestError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key {key:?} given more than once")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value for {field}: {message}")]
    Value { line: usize, field: String, message: String },
    #[error("invalid value for {field}: {message}")]
    Flag { field: String, message: String },
}

/// Partially specified manifest: what a document or the command line sets.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ManifestOverrides {
    pub scenario: Option<ScenarioKind>,
    pub scenarios: Option<Vec<ScenarioKind>>,
    pub config: Option<Configuration>,
    pub gamma: Option<f64>,
    pub sink_rate: Option<f64>,
    pub amplitude: Option<f64>,
    pub omega0: Option<f64>,
    pub phase1: Option<f64>,
    pub phase2: Option<f64>,
    pub omega: Option<f64>,
    pub t_max: Option<f64>,
    pub step: Option<f64>,
    pub t_eval: Option<f64>,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
    pub n_points: Option<usize>,
    pub reoptimize_gamma: Option<bool>,
    pub out: Option<PathBuf>,
}

impl ManifestOverrides {
    /// Fields set in `other` take precedence.
    pub fn merged_with(self, other: ManifestOverrides) -> ManifestOverrides {
        ManifestOverrides {
            scenario: other.scenario.or(self.scenario),
            scenarios: other.scenarios.or(self.scenarios),
            config: other.config.or(self.config),
            gamma: other.gamma.or(self.gamma),
            sink_rate: other.sink_rate.or(self.sink_rate),
            amplitude: other.amplitude.or(self.amplitude),
            omega0: other.omega0.or(self.omega0),
            phase1: other.phase1.or(self.phase1),
            phase2: other.phase2.or(self.phase2),
            omega: other.omega.or(self.omega),
            t_max: other.t_max.or(self.t_max),
            step: other.step.or(self.step),
            t_eval: other.t_eval.or(self.t_eval),
            gamma_min: other.gamma_min.or(self.gamma_min),
            gamma_max: other.gamma_max.or(self.gamma_max),
            n_points: other.n_points.or(self.n_points),
            reoptimize_gamma: other.reoptimize_gamma.or(self.reoptimize_gamma),
            out: other.out.or(self.out),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("{s:?} is not a boolean")),
    }
}

pub fn parse_scenario_list(s: &str) -> Result<Vec<ScenarioKind>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|name| !name.is_empty())
        .map(|name| name.parse::<ScenarioKind>().map_err(|e| e.to_string()))
        .collect()
}

/// Parses a manifest document.
pub fn parse_document(text: &str) -> Result<ManifestOverrides, ManifestError> {
    let mut m = ManifestOverrides::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ManifestError::Syntax {
            line,
            message: format!("expected `key = value`, found {content:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ManifestError::Syntax { line, message: "empty key".into() });
        }
        if seen.iter().any(|k| k == key) {
            return Err(ManifestError::DuplicateKey { line, key: key.to_string() });
        }
        let invalid = |message: String| ManifestError::Value { line, field: key.to_string(), message };
        let num = || parse_f64(value).map(Some).map_err(invalid);
        match key {
            "scenario" => m.scenario = Some(value.parse().map_err(|e: crate::AnalysisError| invalid(e.to_string()))?),
            "scenarios" => m.scenarios = Some(parse_scenario_list(value).map_err(invalid)?),
            "config" => m.config = Some(value.parse().map_err(|e: crate::ModelError| invalid(e.to_string()))?),
            "gamma" => m.gamma = num()?,
            "Gamma" => m.sink_rate = num()?,
            "a" => m.amplitude = num()?,
            "omega0" => m.omega0 = num()?,
            "phase1" => m.phase1 = num()?,
            "phase2" => m.phase2 = num()?,
            "omega" => m.omega = num()?,
            "tmax" => m.t_max = num()?,
            "h" => m.step = num()?,
            "Teval" => m.t_eval = num()?,
            "gamma_min" => m.gamma_min = num()?,
            "gamma_max" => m.gamma_max = num()?,
            "n_points" => {
                m.n_points = Some(value.parse().map_err(|_| invalid(format!("{value:?} is not a count")))?)
            }
            "reoptimize_gamma" => m.reoptimize_gamma = Some(parse_bool(value).map_err(invalid)?),
            "out" => m.out = Some(PathBuf::from(value)),
            _ => return Err(ManifestError::UnknownKey { line, key: key.to_string() }),
        }
        seen.push(key.to_string());
    }
    Ok(m)
}

/// A fully resolved run description. Everything an output depends on is
/// recorded here and echoed into the JSON summaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub scenario: ScenarioKind,
    pub scenarios: Vec<ScenarioKind>,
    pub config: Configuration,
    pub gamma: f64,
    #[serde(rename = "Gamma")]
    pub sink_rate: f64,
    pub a: f64,
    pub omega0: f64,
    pub phase1: Option<f64>,
    pub phase2: Option<f64>,
    pub omega: f64,
    pub tmax: f64,
    pub h: f64,
    #[serde(rename = "Teval")]
    pub t_eval: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub n_points: usize,
    pub reoptimize_gamma: bool,
    pub out: PathBuf,
}

impl RunManifest {
    pub fn resolve(o: ManifestOverrides) -> RunManifest {
        let config = o.config.unwrap_or(Configuration::B);
        let default_gamma = match config {
            Configuration::A => 0.0,
            Configuration::B => REFERENCE_GAMMA,
        };
        let sweep = SweepParams::default();
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: o.scenario.unwrap_or(ScenarioKind::Fixed),
            scenarios: o.scenarios.unwrap_or_else(|| ScenarioKind::ALL.to_vec()),
            config,
            gamma: o.gamma.unwrap_or(default_gamma),
            sink_rate: o.sink_rate.unwrap_or(COHERENT_SINK_RATE),
            a: o.amplitude.unwrap_or(DEFAULT_AMPLITUDE),
            omega0: o.omega0.unwrap_or(DEFAULT_OMEGA0),
            phase1: o.phase1,
            phase2: o.phase2,
            omega: o.omega.unwrap_or(0.0),
            tmax: o.t_max.unwrap_or(DEFAULT_T_EVAL),
            h: o.step.unwrap_or(DEFAULT_STEP),
            t_eval: o.t_eval.unwrap_or(DEFAULT_T_EVAL),
            gamma_min: o.gamma_min.unwrap_or(sweep.gamma_min),
            gamma_max: o.gamma_max.unwrap_or(sweep.gamma_max),
            n_points: o.n_points.unwrap_or(sweep.n_points),
            reoptimize_gamma: o.reoptimize_gamma.unwrap_or(true),
            out: o.out.unwrap_or_else(|| PathBuf::from(".")),
        }
    }

    /// The preset for `kind` with this manifest's deformation parameters.
    pub fn scenario_for(&self, kind: ScenarioKind) -> Scenario {
        let mut s = Scenario::preset(kind);
        s.amplitude = self.a;
        s.omega0 = self.omega0;
        s.with_phases(self.phase1, self.phase2)
    }

    pub fn sweep_params(&self) -> SweepParams {
        SweepParams {
            gamma_min: self.gamma_min,
            gamma_max: self.gamma_max,
            n_points: self.n_points,
            t_eval: self.t_eval,
            step: self.h,
            ..SweepParams::default()
        }
    }

    pub fn compare_params(&self) -> CompareParams {
        CompareParams {
            t_max: self.tmax,
            step: self.h,
            reoptimize: self.reoptimize_gamma,
            fixed_gamma: self.gamma,
            sweep: self.sweep_params(),
            ..CompareParams::default()
        }
    }
}
