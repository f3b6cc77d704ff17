//! Deformation scenarios, dephasing-rate optimisation and the
//! coherent-versus-incoherent comparison.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{evolve, evolve_final, DensityMatrix, DynamicsError, NoiseSpec, Trajectory, DEFAULT_STEP};
use crate::netmodel::{Configuration, DeformationSpec, ModelError, NetworkConfig};

/// Sink rate used for the coherent (configuration A) runs, twice the
/// reference optimal dephasing rate.
pub const COHERENT_SINK_RATE: f64 = 2.1;
/// Dephasing rate used when per-scenario re-optimisation is disabled.
pub const REFERENCE_GAMMA: f64 = 1.05;
pub const DEFAULT_T_EVAL: f64 = 20.0;
pub const DEFAULT_AMPLITUDE: f64 = 0.25;
pub const DEFAULT_OMEGA0: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown scenario {0:?} (expected fixed, site1_osc, site4_osc, antiphase or inphase)")]
    UnknownScenario(String),
    #[error("sweep grid needs at least two points, got {0}")]
    DegenerateGrid(usize),
    #[error("invalid sweep range [{0}, {1}]")]
    Range(f64, f64),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// All sites at rest.
    Fixed,
    /// Site 1 oscillates: the (1,2)/(1,3) pair is modulated.
    #[serde(rename = "site1_osc")]
    Site1Osc,
    /// Site 4 oscillates: the (2,4)/(3,4) pair is modulated.
    #[serde(rename = "site4_osc")]
    Site4Osc,
    /// Sites 1 and 4 oscillate with phase difference pi.
    Antiphase,
    /// Both pairs modulated identically.
    Inphase,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::Fixed,
        ScenarioKind::Site1Osc,
        ScenarioKind::Site4Osc,
        ScenarioKind::Antiphase,
        ScenarioKind::Inphase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Fixed => "fixed",
            ScenarioKind::Site1Osc => "site1_osc",
            ScenarioKind::Site4Osc => "site4_osc",
            ScenarioKind::Antiphase => "antiphase",
            ScenarioKind::Inphase => "inphase",
        }
    }

    /// Default phases of the (zeta1, zeta2) pairs; `None` means the pair is
    /// static.
    fn default_phases(self) -> (Option<f64>, Option<f64>) {
        match self {
            ScenarioKind::Fixed => (None, None),
            ScenarioKind::Site1Osc => (Some(0.0), None),
            ScenarioKind::Site4Osc => (None, Some(0.0)),
            ScenarioKind::Antiphase => (Some(0.0), Some(PI)),
            ScenarioKind::Inphase => (Some(0.0), Some(0.0)),
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AnalysisError::UnknownScenario(s.to_string()))
    }
}

/// A deformation preset with its (overridable) oscillation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub amplitude: f64,
    pub omega0: f64,
    /// Phase of the (1,2)/(1,3) modulation, if that pair moves.
    pub phase1: Option<f64>,
    /// Phase of the (2,4)/(3,4) modulation, if that pair moves.
    pub phase2: Option<f64>,
}

impl Scenario {
    pub fn preset(kind: ScenarioKind) -> Self {
        let (phase1, phase2) = kind.default_phases();
        Self { kind, amplitude: DEFAULT_AMPLITUDE, omega0: DEFAULT_OMEGA0, phase1, phase2 }
    }

    /// Replaces the phases of whichever pairs the preset modulates.
    pub fn with_phases(mut self, phase1: Option<f64>, phase2: Option<f64>) -> Self {
        if let (Some(p), Some(_)) = (phase1, self.phase1) {
            self.phase1 = Some(p);
        }
        if let (Some(p), Some(_)) = (phase2, self.phase2) {
            self.phase2 = Some(p);
        }
        self
    }

    pub fn deformations(&self) -> Result<(Option<DeformationSpec>, Option<DeformationSpec>), ModelError> {
        let make = |phase: Option<f64>| {
            phase.map(|p| DeformationSpec::new(self.amplitude, self.omega0, p)).transpose()
        };
        Ok((make(self.phase1)?, make(self.phase2)?))
    }

    /// Unit-coupling diamond carrying this scenario's deformations.
    pub fn network(&self, configuration: Configuration) -> Result<NetworkConfig, ModelError> {
        let (first, second) = self.deformations()?;
        NetworkConfig::diamond(configuration, 1.0, first, second)
    }
}

impl From<ScenarioKind> for Scenario {
    fn from(kind: ScenarioKind) -> Self {
        Scenario::preset(kind)
    }
}

/// Evolves the scenario network from an excitation on site 1.
pub fn run_scenario(
    scenario: &Scenario,
    configuration: Configuration,
    noise: &NoiseSpec,
    t_max: f64,
    step: f64,
) -> Result<Trajectory, AnalysisError> {
    let network = scenario.network(configuration)?;
    Ok(evolve(&network, noise, &DensityMatrix::localized(1), t_max, step)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepParams {
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub n_points: usize,
    pub t_eval: f64,
    pub step: f64,
    /// Target width of the golden-section bracket around the grid optimum.
    pub resolution: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self { gamma_min: 0.2, gamma_max: 3.0, n_points: 29, t_eval: DEFAULT_T_EVAL, step: DEFAULT_STEP, resolution: 0.01 }
    }
}

impl SweepParams {
    fn validate(&self) -> Result<(), AnalysisError> {
        if self.n_points < 2 {
            return Err(AnalysisError::DegenerateGrid(self.n_points));
        }
        let finite = self.gamma_min.is_finite() && self.gamma_max.is_finite();
        if !finite || self.gamma_min < 0.0 || self.gamma_min >= self.gamma_max {
            return Err(AnalysisError::Range(self.gamma_min, self.gamma_max));
        }
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return Err(AnalysisError::Parameter(format!("resolution {}", self.resolution)));
        }
        if !(self.t_eval.is_finite() && self.t_eval > 0.0) {
            return Err(AnalysisError::Parameter(format!("T_eval {}", self.t_eval)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let span = self.gamma_max - self.gamma_min;
        let last = (self.n_points - 1) as f64;
        (0..self.n_points).map(|k| self.gamma_min + span * k as f64 / last).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub scenario: ScenarioKind,
    pub t_eval: f64,
    pub gammas: Vec<f64>,
    /// Sink population at `t_eval` for each grid rate.
    pub efficiencies: Vec<f64>,
    pub grid_best: usize,
    pub gamma_opt: f64,
    pub efficiency_opt: f64,
    /// Final golden-section bracket around `gamma_opt`.
    pub bracket: (f64, f64),
    #[serde(skip)]
    pub curve: Trajectory,
}

/// Configuration-B efficiency at `t_eval` with `gamma2 = gamma3 = gamma`
/// and sink rate `2 gamma`.
pub fn incoherent_efficiency(network: &NetworkConfig, gamma: f64, t_eval: f64, step: f64) -> Result<f64, AnalysisError> {
    let noise = NoiseSpec::tied(gamma)?;
    let rho = evolve_final(network, &noise, &DensityMatrix::localized(1), t_eval, step)?;
    Ok(rho.sink_population())
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// `(argument, value)` of the best probe and the final bracket.
type GoldenOutcome = ((f64, f64), (f64, f64));

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
fn golden_maximize<F>(mut lo: f64, mut hi: f64, tol: f64, mut f: F) -> Result<GoldenOutcome, AnalysisError>
where
    F: FnMut(f64) -> Result<f64, AnalysisError>,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    Ok((best, (lo, hi)))
}

/// Scans the dephasing rate on a uniform grid, then refines around the grid
/// maximum by golden-section search. The refined rate is only accepted if
/// it beats the best grid point.
pub fn gamma_sweep(scenario: &Scenario, params: &SweepParams) -> Result<SweepResult, AnalysisError> {
    params.validate()?;
    let network = scenario.network(Configuration::B)?;
    let gammas = params.grid();
    let efficiencies = gammas
        .par_iter()
        .map(|&g| incoherent_efficiency(&network, g, params.t_eval, params.step))
        .collect::<Result<Vec<_>, _>>()?;

    // First maximum wins ties, independent of evaluation order.
    let grid_best = efficiencies
        .iter()
        .enumerate()
        .fold(0, |best, (k, &e)| if e > efficiencies[best] { k } else { best });

    let lo = gammas[grid_best.saturating_sub(1)];
    let hi = gammas[(grid_best + 1).min(gammas.len() - 1)];
    let ((g_refined, e_refined), bracket) = golden_maximize(lo, hi, params.resolution, |g| {
        incoherent_efficiency(&network, g, params.t_eval, params.step)
    })?;
    let (gamma_opt, efficiency_opt) = if e_refined > efficiencies[grid_best] {
        (g_refined, e_refined)
    } else {
        (gammas[grid_best], efficiencies[grid_best])
    };

    let curve = evolve(&network, &NoiseSpec::tied(gamma_opt)?, &DensityMatrix::localized(1), params.t_eval, params.step)?;

    Ok(SweepResult {
        scenario: scenario.kind,
        t_eval: params.t_eval,
        gammas,
        efficiencies,
        grid_best,
        gamma_opt,
        efficiency_opt,
        bracket,
        curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareParams {
    pub t_max: f64,
    pub step: f64,
    /// Re-optimise the incoherent dephasing rate for each scenario; otherwise
    /// use `fixed_gamma`.
    pub reoptimize: bool,
    pub fixed_gamma: f64,
    pub coherent_sink_rate: f64,
    pub sweep: SweepParams,
}

impl Default for CompareParams {
    fn default() -> Self {
        Self {
            t_max: DEFAULT_T_EVAL,
            step: DEFAULT_STEP,
            reoptimize: true,
            fixed_gamma: REFERENCE_GAMMA,
            coherent_sink_rate: COHERENT_SINK_RATE,
            sweep: SweepParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CoherentWins,
    IncoherentWins,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CoherentWins => "coherent-wins",
            Verdict::IncoherentWins => "incoherent-wins",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub scenario: ScenarioKind,
    pub gamma_incoherent: f64,
    pub coherent_noise: NoiseSpec,
    pub incoherent_noise: NoiseSpec,
    pub coherent: Trajectory,
    pub incoherent: Trajectory,
    pub crossover_time: Option<f64>,
    pub coherent_terminal: f64,
    pub incoherent_terminal: f64,
    pub verdict: Verdict,
}

impl Comparison {
    /// `incoherent - coherent` sink population on the shared grid.
    pub fn advantage(&self) -> Vec<f64> {
        self.incoherent
            .sink_series()
            .iter()
            .zip(self.coherent.sink_series())
            .map(|(i, c)| i - c)
            .collect()
    }
}

/// Minimum time the incoherent lead must persist to count as a crossover.
pub const CROSSOVER_PERSISTENCE: f64 = 1.0;

/// First grid time at which `advantage` turns positive and then stays
/// positive for at least [`CROSSOVER_PERSISTENCE`].
pub fn persistent_crossover(times: &[f64], advantage: &[f64]) -> Option<f64> {
    for k in 1..advantage.len() {
        if !(advantage[k - 1] <= 0.0 && advantage[k] > 0.0) {
            continue;
        }
        let start = times[k];
        if start + CROSSOVER_PERSISTENCE > times[times.len() - 1] + 1e-12 {
            return None;
        }
        let persists = times[k..]
            .iter()
            .zip(&advantage[k..])
            .take_while(|(t, _)| **t <= start + CROSSOVER_PERSISTENCE + 1e-12)
            .all(|(_, &d)| d > 0.0);
        if persists {
            return Some(start);
        }
    }
    None
}

/// Runs configuration A (no dephasing) against configuration B at its
/// optimal (or reference) dephasing rate for one scenario.
pub fn compare_transport(scenario: &Scenario, params: &CompareParams) -> Result<Comparison, AnalysisError> {
    let gamma = if params.reoptimize {
        gamma_sweep(scenario, &params.sweep)?.gamma_opt
    } else {
        params.fixed_gamma
    };
    let coherent_noise = NoiseSpec::uniform(0.0, params.coherent_sink_rate)?;
    let incoherent_noise = NoiseSpec::tied(gamma)?;
    let (coherent, incoherent) = rayon::join(
        || run_scenario(scenario, Configuration::A, &coherent_noise, params.t_max, params.step),
        || run_scenario(scenario, Configuration::B, &incoherent_noise, params.t_max, params.step),
    );
    let (coherent, incoherent) = (coherent?, incoherent?);

    let coherent_terminal = coherent.final_state().sink_population();
    let incoherent_terminal = incoherent.final_state().sink_population();
    let mut cmp = Comparison {
        scenario: scenario.kind,
        gamma_incoherent: gamma,
        coherent_noise,
        incoherent_noise,
        coherent,
        incoherent,
        crossover_time: None,
        coherent_terminal,
        incoherent_terminal,
        verdict: if incoherent_terminal > coherent_terminal { Verdict::IncoherentWins } else { Verdict::CoherentWins },
    };
    cmp.crossover_time = persistent_crossover(cmp.coherent.times(), &cmp.advantage());
    Ok(cmp)
}
