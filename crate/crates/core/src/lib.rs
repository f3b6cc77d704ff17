//! Simulation of single-excitation transport through a four-site diamond
//! network attached to an irreversible sink.
//!
//! Two sign patterns of the couplings are supported. With all couplings
//! positive the network behaves as a three-site chain and transport is
//! coherent. Flipping the (3,4) coupling traps the coherent dynamics in a
//! subspace that never reaches the sink, so transport only happens through
//! dephasing on the middle sites. Couplings can be harmonically modulated
//! to model oscillating sites.

pub mod analysis;
pub mod cli;

pub mod dynamics;
pub mod netmodel;
pub mod oracle;

pub use analysis::{
    compare_transport, gamma_sweep, run_scenario, AnalysisError, CompareParams, Comparison, Scenario, ScenarioKind,
    SweepParams, SweepResult, Verdict,
};
pub use dynamics::{
    evolve, sink_efficiency, subspace_population, DensityMatrix, DynamicsError, NoiseSpec, Subspace, Trajectory,
};
pub use netmodel::{coupling_at, hamiltonian_at, Configuration, DeformationSpec, Edge, ModelError, NetworkConfig, Sign};
