//! The four-site diamond network and its single-excitation Hamiltonian.
//!
//! Sites are labelled 1..=4 as in the usual diamond picture: site 1 on the
//! left, sites 2 and 3 in the middle column, site 4 on the right. A fifth
//! basis state represents the sink, which is fed from site 4 and never
//! couples coherently. All energies and rates are in units of the bare
//! coupling `J0`, with `hbar = 1`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix3, Matrix4, SMatrix};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Dimension of the state space: four sites plus the sink.
pub const DIM: usize = 5;
/// Basis index of the sink state.
pub const SINK: usize = 4;

pub type Matrix5c = SMatrix<C64, DIM, DIM>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("deformation amplitude must lie in [0, 0.5), got {0}")]
    Amplitude(f64),
    #[error("deformation frequency must be finite and non-negative, got {0}")]
    Frequency(f64),
    #[error("deformation phase must be finite, got {0}")]
    Phase(f64),
    #[error("invalid edge ({i}, {j}): {reason}")]
    Edge { i: usize, j: usize, reason: &'static str },
    #[error("the network needs exactly the edges (1,2), (1,3), (2,4), (3,4)")]
    Topology,
    #[error("edge signs match neither configuration A nor configuration B")]
    SignPattern,
    #[error("edges ({0}) and ({1}) must carry identical coupling and deformation")]
    Unpaired(&'static str, &'static str),
    #[error("site frequency must be finite, got {0}")]
    Frequency0(f64),
    #[error("Hamiltonian does not have the {0} symmetry")]
    WrongSector(&'static str),
    #[error("unknown configuration {0:?} (expected A or B)")]
    UnknownConfiguration(String),
}

/// Harmonic modulation of a coupling: the bond length follows
/// `d0 (1 - 2a sin(omega0 t + phase))` and the dipolar coupling scales as its
/// inverse cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationSpec {
    amplitude: f64,
    omega0: f64,
    phase: f64,
}

impl DeformationSpec {
    pub fn new(amplitude: f64, omega0: f64, phase: f64) -> Result<Self, ModelError> {
        if !(0.0..0.5).contains(&amplitude) {
            return Err(ModelError::Amplitude(amplitude));
        }
        if !omega0.is_finite() || omega0 < 0.0 {
            return Err(ModelError::Frequency(omega0));
        }
        if !phase.is_finite() {
            return Err(ModelError::Phase(phase));
        }
        Ok(Self { amplitude, omega0, phase })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Relative bond length `d(t) / d0`, always positive.
    pub fn relative_distance(&self, t: f64) -> f64 {
        1.0 - 2.0 * self.amplitude * (self.omega0 * t + self.phase).sin()
    }

    /// Multiplicative factor applied to the bare coupling at time `t`.
    pub fn modulation(&self, t: f64) -> f64 {
        self.relative_distance(t).powi(-3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A coupling between two sites, stored once with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    i: usize,
    j: usize,
    sign: Sign,
    base_coupling: f64,
    deformation: Option<DeformationSpec>,
}

impl Edge {
    pub fn new(
        i: usize,
        j: usize,
        sign: Sign,
        base_coupling: f64,
        deformation: Option<DeformationSpec>,
    ) -> Result<Self, ModelError> {
        if i == j {
            return Err(ModelError::Edge { i, j, reason: "self-loop" });
        }
        if !(1..=4).contains(&i) || !(1..=4).contains(&j) {
            return Err(ModelError::Edge { i, j, reason: "site index outside 1..=4" });
        }
        if !(base_coupling.is_finite() && base_coupling > 0.0) {
            return Err(ModelError::Edge { i, j, reason: "coupling must be positive" });
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(Self { i, j, sign, base_coupling, deformation })
    }

    pub fn sites(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn base_coupling(&self) -> f64 {
        self.base_coupling
    }

    pub fn deformation(&self) -> Option<&DeformationSpec> {
        self.deformation.as_ref()
    }
}

/// Signed coupling of `edge` at time `t`.
pub fn coupling_at(edge: &Edge, t: f64) -> f64 {
    let magnitude = match &edge.deformation {
        Some(d) => edge.base_coupling * d.modulation(t),
        None => edge.base_coupling,
    };
    edge.sign.value() * magnitude
}

/// Sign pattern of the diamond.
///
/// `A` has all couplings positive and reduces to a three-site chain. `B`
/// flips the (3,4) coupling, which splits the dynamics into two invariant
/// two-dimensional subspaces with no coherent path from site 1 to site 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Configuration {
    A,
    B,
}

impl Configuration {
    fn sign_34(self) -> Sign {
        match self {
            Configuration::A => Sign::Plus,
            Configuration::B => Sign::Minus,
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Configuration::A => "A",
            Configuration::B => "B",
        })
    }
}

impl FromStr for Configuration {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Configuration::A),
            "B" | "b" => Ok(Configuration::B),
            other => Err(ModelError::UnknownConfiguration(other.to_string())),
        }
    }
}

const EDGE_SITES: [(usize, usize); 4] = [(1, 2), (1, 3), (2, 4), (3, 4)];

/// The full network description. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkConfig {
    omega: f64,
    /// Ordered as (1,2), (1,3), (2,4), (3,4).
    edges: [Edge; 4],
    sink_source: usize,
    configuration: Configuration,
}

impl NetworkConfig {
    /// Builds the diamond with uniform bare coupling `coupling`, the sign
    /// pattern of `configuration`, and optional deformations of the
    /// (1,2)/(1,3) pair and the (2,4)/(3,4) pair.
    pub fn diamond(
        configuration: Configuration,
        coupling: f64,
        first_pair: Option<DeformationSpec>,
        second_pair: Option<DeformationSpec>,
    ) -> Result<Self, ModelError> {
        let edges = vec![
            Edge::new(1, 2, Sign::Plus, coupling, first_pair)?,
            Edge::new(1, 3, Sign::Plus, coupling, first_pair)?,
            Edge::new(2, 4, Sign::Plus, coupling, second_pair)?,
            Edge::new(3, 4, configuration.sign_34(), coupling, second_pair)?,
        ];
        Self::from_edges(0.0, edges)
    }

    /// Validates an arbitrary edge list against the diamond invariants and
    /// infers the configuration from the sign pattern.
    pub fn from_edges(omega: f64, edges: Vec<Edge>) -> Result<Self, ModelError> {
        if !omega.is_finite() {
            return Err(ModelError::Frequency0(omega));
        }
        if edges.len() != 4 {
            return Err(ModelError::Topology);
        }
        let mut slots: [Option<Edge>; 4] = [None; 4];
        for edge in edges {
            let slot = EDGE_SITES
                .iter()
                .position(|&s| s == edge.sites())
                .ok_or(ModelError::Topology)?;
            if slots[slot].replace(edge).is_some() {
                return Err(ModelError::Topology);
            }
        }
        let edges = slots.map(|e| e.expect("four distinct slots filled"));

        let configuration = match edges.map(|e| e.sign) {
            [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus] => Configuration::A,
            [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus] => Configuration::B,
            _ => return Err(ModelError::SignPattern),
        };
        let paired = |a: &Edge, b: &Edge| {
            a.base_coupling == b.base_coupling && a.deformation == b.deformation
        };
        if !paired(&edges[0], &edges[1]) {
            return Err(ModelError::Unpaired("1,2", "1,3"));
        }
        if !paired(&edges[2], &edges[3]) {
            return Err(ModelError::Unpaired("2,4", "3,4"));
        }

        Ok(Self { omega, edges, sink_source: 4, configuration })
    }

    /// Same network with the common site frequency set to `omega`.
    pub fn with_omega(mut self, omega: f64) -> Result<Self, ModelError> {
        if !omega.is_finite() {
            return Err(ModelError::Frequency0(omega));
        }
        self.omega = omega;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn edges(&self) -> &[Edge; 4] {
        &self.edges
    }

    pub fn sink_source(&self) -> usize {
        self.sink_source
    }

    pub fn configuration(&self) -> Configuration {
        self.configuration
    }

    /// True when no edge carries a deformation.
    pub fn is_static(&self) -> bool {
        self.edges.iter().all(|e| e.deformation.is_none())
    }

    /// Coupling magnitude shared by the (1,2) and (1,3) edges.
    pub fn zeta1(&self, t: f64) -> f64 {
        coupling_at(&self.edges[0], t).abs()
    }

    /// Coupling magnitude shared by the (2,4) and (3,4) edges.
    pub fn zeta2(&self, t: f64) -> f64 {
        coupling_at(&self.edges[2], t).abs()
    }
}

/// Hamiltonian over `{|1>, |2>, |3>, |4>, |sink>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianMatrix(Matrix5c);

impl HamiltonianMatrix {
    pub fn matrix(&self) -> &Matrix5c {
        &self.0
    }

    /// The 4x4 block acting on the sites.
    pub fn site_block(&self) -> Matrix4<C64> {
        self.0.fixed_view::<4, 4>(0, 0).into_owned()
    }
}

pub fn hamiltonian_at(config: &NetworkConfig, t: f64) -> HamiltonianMatrix {
    let mut h = Matrix5c::zeros();
    for k in 0..4 {
        h[(k, k)] = C64::new(config.omega, 0.0);
    }
    for edge in &config.edges {
        let (i, j) = edge.sites();
        let c = C64::new(coupling_at(edge, t), 0.0);
        h[(i - 1, j - 1)] = c;
        h[(j - 1, i - 1)] = c;
    }
    HamiltonianMatrix(h)
}

/// Isometry from `{|s1>, |s2>, |s3>}` into the site space, with
/// `|s2> = (|2> + |3>)/sqrt 2`.
pub fn chain_isometry() -> SMatrix<C64, 4, 3> {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    SMatrix::<C64, 4, 3>::new(o, z, z, z, r, z, z, r, z, z, z, o)
}

/// Unitary whose columns are `|s1>, |s1+>, |s1->, |s2>` with
/// `|s1±> = (|2> ± |3>)/sqrt 2`.
pub fn split_unitary() -> Matrix4<C64> {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    Matrix4::new(o, z, z, z, z, r, r, z, z, r, -r, z, z, z, z, o)
}

// Tolerance for recognising the pair structure. Couplings are computed from
// identical expressions for paired edges, so equality is in practice exact.
const SECTOR_TOL: f64 = 1e-12;

fn pair_structure(h: &HamiltonianMatrix) -> (C64, C64, C64, C64) {
    let m = &h.0;
    (m[(0, 1)], m[(0, 2)], m[(1, 3)], m[(2, 3)])
}

/// Projects a configuration-A Hamiltonian onto the three-site chain
/// `|s1> - |s2> - |s3>`. The chain couplings are `sqrt 2 * zeta1` and
/// `sqrt 2 * zeta2`.
pub fn to_chain_basis(h: &HamiltonianMatrix) -> Result<Matrix3<C64>, ModelError> {
    let (j12, j13, j24, j34) = pair_structure(h);
    if (j12 - j13).norm() > SECTOR_TOL || (j24 - j34).norm() > SECTOR_TOL {
        return Err(ModelError::WrongSector("configuration A chain"));
    }
    let v = chain_isometry();
    Ok(v.adjoint() * h.site_block() * v)
}

/// Configuration-B Hamiltonian in the `{|s1>, |s1+>, |s1->, |s2>}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitBasis {
    pub transformed: Matrix4<C64>,
}

impl SplitBasis {
    /// Block on `span{|s1>, |s1+>}`.
    pub fn first_block(&self) -> Matrix2<C64> {
        self.transformed.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Block on `span{|s1->, |s2>}`.
    pub fn second_block(&self) -> Matrix2<C64> {
        self.transformed.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Largest entry coupling the two blocks.
    pub fn cross_block_max(&self) -> f64 {
        let upper = self.transformed.fixed_view::<2, 2>(0, 2);
        let lower = self.transformed.fixed_view::<2, 2>(2, 0);
        upper.iter().chain(lower.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn to_split_basis(h: &HamiltonianMatrix) -> Result<SplitBasis, ModelError> {
    let (j12, j13, j24, j34) = pair_structure(h);
    if (j12 - j13).norm() > SECTOR_TOL || (j24 + j34).norm() > SECTOR_TOL {
        return Err(ModelError::WrongSector("configuration B split"));
    }
    let u = split_unitary();
    Ok(SplitBasis { transformed: u.adjoint() * h.site_block() * u })
}
