//! Command-line front end: `simulate`, `sweep` and `compare`.
//!
//! Each command resolves a [`RunManifest`] from defaults, an optional
//! manifest document (`--config`) and flags, in increasing precedence, then
//! writes CSV series and a JSON summary into the output directory. Outputs
//! depend only on the manifest, so re-running one reproduces them byte for
//! byte.
//!
//! Exit codes: 0 on success, 1 for usage or parse errors, 2 when a
//! trajectory breaches the state invariants.

pub mod manifest;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{compare_transport, gamma_sweep, AnalysisError, ScenarioKind, Verdict};
use crate::dynamics::{sink_efficiency, DynamicsError, InvariantReport, NoiseSpec};
use crate::netmodel::Configuration;
pub use manifest::{parse_document, ManifestError, ManifestOverrides, RunManifest};
use output::{columns_csv, json_string, trajectory_csv, write_file};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("manifest {path}: {source}")]
    Manifest { path: PathBuf, source: ManifestError },
    #[error(transparent)]
    Flag(#[from] ManifestError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Analysis(AnalysisError::Dynamics(DynamicsError::InvariantBreach { .. })) => 2,
            _ => 1,
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError::Analysis(e.into())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Parser)]
#[command(name = "diamond-transport", version, about = "Coherent versus dephasing-assisted transport in a four-site network")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one scenario and write its population series.
    Simulate(RunArgs),
    /// Scan the dephasing rate (with Gamma = 2 gamma) and locate the optimum.
    Sweep(RunArgs),
    /// Compare coherent and optimal incoherent transport per scenario.
    Compare(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Manifest document with `key = value` lines.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Scenario name; for `compare`, a comma-separated list.
    #[arg(long, value_name = "NAME")]
    pub scenario: Option<String>,
    /// Sign pattern of the network, A or B.
    #[arg(long, value_name = "A|B")]
    pub network: Option<String>,
    /// Dephasing rate on sites 2 and 3.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Sink rate.
    #[arg(long = "Gamma", allow_negative_numbers = true)]
    pub sink_rate: Option<f64>,
    /// Final simulation time.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Integration step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Evaluation time for the efficiency in sweeps.
    #[arg(long)]
    pub teval: Option<f64>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Re-optimise gamma per scenario in `compare` instead of using `--gamma`.
    #[arg(long, value_name = "BOOL")]
    pub reoptimize_gamma: Option<bool>,
    /// Lower end of the sweep grid.
    #[arg(long)]
    pub gamma_min: Option<f64>,
    /// Upper end of the sweep grid.
    #[arg(long)]
    pub gamma_max: Option<f64>,
    /// Number of sweep grid points (at least 2).
    #[arg(long)]
    pub points: Option<usize>,
}

impl RunArgs {
    fn overrides(&self, list_scenarios: bool) -> Result<ManifestOverrides, CliError> {
        let flag = |field: &str, message: String| ManifestError::Flag { field: field.to_string(), message };
        let mut o = ManifestOverrides::default();
        if let Some(s) = &self.scenario {
            if list_scenarios {
                o.scenarios = Some(manifest::parse_scenario_list(s).map_err(|m| flag("scenario", m))?);
            } else {
                o.scenario = Some(s.parse().map_err(|e: AnalysisError| flag("scenario", e.to_string()))?);
            }
        }
        if let Some(n) = &self.network {
            o.config = Some(n.parse().map_err(|e: crate::ModelError| flag("network", e.to_string()))?);
        }
        o.gamma = self.gamma;
        o.sink_rate = self.sink_rate;
        o.t_max = self.tmax;
        o.step = self.dt;
        o.t_eval = self.teval;
        o.out = self.out.clone();
        o.reoptimize_gamma = self.reoptimize_gamma;
        o.gamma_min = self.gamma_min;
        o.gamma_max = self.gamma_max;
        o.n_points = self.points;
        Ok(o)
    }

    pub fn manifest(&self, list_scenarios: bool) -> Result<RunManifest, CliError> {
        let from_file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(io_err(path))?;
                parse_document(&text).map_err(|source| CliError::Manifest { path: path.clone(), source })?
            }
            None => ManifestOverrides::default(),
        };
        Ok(RunManifest::resolve(from_file.merged_with(self.overrides(list_scenarios)?)))
    }
}

#[derive(Debug, Serialize)]
pub struct Terminal {
    pub psink: f64,
    pub psink_eq10: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

#[derive(Debug, Serialize)]
pub struct SimulateSummary {
    pub command: &'static str,
    pub manifest: RunManifest,
    pub step_used: f64,
    pub samples: usize,
    pub terminal: Terminal,
    pub invariants: InvariantReport,
    pub outputs: Vec<PathBuf>,
}

fn stem(kind: ScenarioKind, config: Configuration) -> String {
    format!("{kind}_{config}")
}

pub fn simulate(m: &RunManifest) -> Result<SimulateSummary, CliError> {
    let scenario = m.scenario_for(m.scenario);
    let network = scenario.network(m.config).and_then(|n| n.with_omega(m.omega)).map_err(AnalysisError::from)?;
    let noise = NoiseSpec::uniform(m.gamma, m.sink_rate)?;
    let traj = crate::dynamics::evolve(&network, &noise, &crate::DensityMatrix::localized(1), m.tmax, m.h)?;

    let base = stem(m.scenario, m.config);
    let csv_path = m.out.join(format!("simulate_{base}.csv"));
    let json_path = m.out.join(format!("simulate_{base}.json"));
    write_file(&csv_path, &trajectory_csv(&traj, &noise)).map_err(io_err(&csv_path))?;

    let last = traj.final_state();
    let summary = SimulateSummary {
        command: "simulate",
        manifest: m.clone(),
        step_used: traj.step(),
        samples: traj.len(),
        terminal: Terminal {
            psink: last.sink_population(),
            psink_eq10: *sink_efficiency(&traj, &noise).last().expect("non-empty"),
            p1: last.population(1),
            p2: last.population(2),
            p3: last.population(3),
            p4: last.population(4),
        },
        invariants: traj.diagnostics(),
        outputs: vec![csv_path, json_path.clone()],
    };
    write_file(&json_path, &json_string(&summary)).map_err(io_err(&json_path))?;
    Ok(summary)
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub command: &'static str,
    pub manifest: RunManifest,
    pub scenario: ScenarioKind,
    #[serde(rename = "Teval")]
    pub t_eval: f64,
    pub n_points: usize,
    pub grid_best_gamma: f64,
    pub grid_best_efficiency: f64,
    pub gamma_opt: f64,
    pub efficiency_opt: f64,
    pub bracket: (f64, f64),
    pub outputs: Vec<PathBuf>,
}

pub fn sweep(m: &RunManifest) -> Result<SweepSummary, CliError> {
    let scenario = m.scenario_for(m.scenario);
    let result = gamma_sweep(&scenario, &m.sweep_params())?;

    let csv_path = m.out.join(format!("sweep_{}.csv", m.scenario));
    let curve_path = m.out.join(format!("sweep_{}_optimal.csv", m.scenario));
    let json_path = m.out.join(format!("sweep_{}.json", m.scenario));
    let rows = result.gammas.iter().zip(&result.efficiencies).map(|(g, e)| vec![*g, *e]);
    write_file(&csv_path, &columns_csv("gamma,efficiency", rows)).map_err(io_err(&csv_path))?;
    let noise = NoiseSpec::tied(result.gamma_opt)?;
    write_file(&curve_path, &trajectory_csv(&result.curve, &noise)).map_err(io_err(&curve_path))?;

    let summary = SweepSummary {
        command: "sweep",
        manifest: m.clone(),
        scenario: m.scenario,
        t_eval: result.t_eval,
        n_points: result.gammas.len(),
        grid_best_gamma: result.gammas[result.grid_best],
        grid_best_efficiency: result.efficiencies[result.grid_best],
        gamma_opt: result.gamma_opt,
        efficiency_opt: result.efficiency_opt,
        bracket: result.bracket,
        outputs: vec![csv_path, curve_path, json_path.clone()],
    };
    write_file(&json_path, &json_string(&summary)).map_err(io_err(&json_path))?;
    Ok(summary)
}

#[derive(Debug, Serialize)]
pub struct ScenarioVerdict {
    pub scenario: ScenarioKind,
    pub gamma_incoherent: f64,
    #[serde(rename = "Gamma_coherent")]
    pub coherent_sink_rate: f64,
    pub coherent_terminal: f64,
    pub incoherent_terminal: f64,
    pub crossover_time: Option<f64>,
    pub verdict: Verdict,
    pub coherent_csv: PathBuf,
    pub incoherent_csv: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct CompareSummary {
    pub command: &'static str,
    pub manifest: RunManifest,
    pub warnings: Vec<String>,
    pub results: Vec<ScenarioVerdict>,
}

pub fn compare(m: &RunManifest) -> Result<CompareSummary, CliError> {
    if m.scenarios.is_empty() {
        return Err(CliError::Usage("compare needs at least one scenario".into()));
    }
    let mut warnings = Vec::new();
    let mut scenarios: Vec<ScenarioKind> = Vec::new();
    for &s in &m.scenarios {
        if scenarios.contains(&s) {
            warnings.push(format!("duplicate scenario {s} ignored"));
        } else {
            scenarios.push(s);
        }
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let mut manifest = m.clone();
    manifest.scenarios = scenarios.clone();

    let params = m.compare_params();
    let mut results = Vec::with_capacity(scenarios.len());
    for kind in scenarios {
        let cmp = compare_transport(&m.scenario_for(kind), &params)?;
        let coherent_csv = m.out.join(format!("compare_{kind}_coherent.csv"));
        let incoherent_csv = m.out.join(format!("compare_{kind}_incoherent.csv"));
        write_file(&coherent_csv, &trajectory_csv(&cmp.coherent, &cmp.coherent_noise)).map_err(io_err(&coherent_csv))?;
        write_file(&incoherent_csv, &trajectory_csv(&cmp.incoherent, &cmp.incoherent_noise))
            .map_err(io_err(&incoherent_csv))?;
        results.push(ScenarioVerdict {
            scenario: kind,
            gamma_incoherent: cmp.gamma_incoherent,
            coherent_sink_rate: params.coherent_sink_rate,
            coherent_terminal: cmp.coherent_terminal,
            incoherent_terminal: cmp.incoherent_terminal,
            crossover_time: cmp.crossover_time,
            verdict: cmp.verdict,
            coherent_csv,
            incoherent_csv,
        });
    }
    let summary = CompareSummary { command: "compare", manifest, warnings, results };
    let json_path = m.out.join("compare.json");
    write_file(&json_path, &json_string(&summary)).map_err(io_err(&json_path))?;
    Ok(summary)
}

/// Runs a parsed command, returning the path of the JSON summary.
pub fn execute(command: &Command) -> Result<PathBuf, CliError> {
    match command {
        Command::Simulate(args) => {
            let s = simulate(&args.manifest(false)?)?;
            Ok(s.outputs.last().cloned().expect("summary path"))
        }
        Command::Sweep(args) => {
            let s = sweep(&args.manifest(false)?)?;
            Ok(s.outputs.last().cloned().expect("summary path"))
        }
        Command::Compare(args) => {
            let m = args.manifest(true)?;
            compare(&m)?;
            Ok(m.out.join("compare.json"))
        }
    }
}

/// Entry point shared by the binary: parses `args`, runs, and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(summary) => {
            println!("{}", summary.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
