//! Holonomic gates: a single-qubit phase gate from a driven spin, a
//! conditional phase from two J-coupled spins, and a rotation (Hadamard-type)
//! gate from the dark subspace of a tripod.
//!
//! Every gate can be computed along three independent routes: closed form,
//! the Wilson loop of the connection, and the time-dependent oracle.

mod cphase;
mod hadamard;
mod phase;

pub use cphase::{
    conditional_phases, cphase_gate, delta_gamma, optimal_amplitude, rotating_frame_levels, transition_frequencies,
    two_spin_levels, ConditionalPhases, Level, OptimalAmplitude, PhaseDecomposition, TwoSpinParams,
};
pub use hadamard::{
    dark_frame, dark_states, hadamard, hadamard_gate, rotation, tripod_analytic_frames, tripod_hamiltonian,
    TripodParams, DEFAULT_COS_HOLD,
};
pub use phase::{cone_angle, phase_gate, RabiDrive};

use serde::{Deserialize, Serialize, Serializer};

use crate::numerics::{c, polar_unitary, unitarity_defect, CMatrix};
use crate::oracle::DEFAULT_LEAKAGE_BUDGET;

/// How a gate's holonomy is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Wilson,
    Oracle,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::ClosedForm, Route::Wilson, Route::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed_form",
            Route::Wilson => "wilson",
            Route::Oracle => "oracle",
        }
    }
}

/// Discretization of the numerical routes.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteOptions {
    /// Wilson-loop steps `M`.
    pub wilson_steps: usize,
    /// Oracle traversal time `T`.
    pub total_time: f64,
    /// Oracle time steps; `None` uses the schedule default.
    pub time_steps: Option<usize>,
    pub leakage_budget: f64,
    /// Overall tripod coupling `B`.
    pub tripod_coupling: f64,
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions {
            wilson_steps: 4000,
            total_time: 1e3,
            time_steps: None,
            leakage_budget: DEFAULT_LEAKAGE_BUDGET,
            tripod_coupling: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Phase,
    ConditionalPhase,
    Hadamard,
}

/// How spin labels map to computational bits in conditional-phase reports.
pub const SPIN_TO_BIT: &str = "up = 1, down = 0; spin a is the first label and the more significant bit";

impl GateKind {
    /// Labels of the basis the gate's matrices are written in.
    pub fn basis(self) -> &'static [&'static str] {
        match self {
            GateKind::Phase => &["aligned", "anti_aligned"],
            GateKind::ConditionalPhase => &crate::frames::TWO_SPIN_BASIS,
            GateKind::Hadamard => &["chi1", "chi2"],
        }
    }

    /// Conventions block for reports of this gate.
    pub fn conventions(self) -> Conventions {
        let mut c = Conventions::new(self.basis());
        if self == GateKind::ConditionalPhase {
            c.spin_to_bit = Some(SPIN_TO_BIT);
        }
        c
    }
}

/// Geometric-phase content of a report, by gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometricPhases {
    Phase {
        cone_angle: f64,
        loops: u32,
        /// Per-loop phase of the level aligned with the effective field.
        gamma_aligned: f64,
        gamma_anti_aligned: f64,
        /// Relative phase `(γ_anti − γ_aligned)·loops` from this route.
        alpha: f64,
        /// Closed-form `2π(1 − cos θ)·loops`.
        alpha_target: f64,
    },
    ConditionalPhase {
        cos_theta_plus: f64,
        cos_theta_minus: f64,
        gamma_plus: f64,
        gamma_minus: f64,
        delta_gamma: f64,
        /// Phases of `(↑↑, ↑↓, ↓↑, ↓↓)`.
        level_phases: [f64; 4],
        decomposition: PhaseDecomposition,
        beta_target: f64,
    },
    Rotation {
        /// Closed-form `2π cos θ_hold`.
        gamma: f64,
        /// Half the eigenphase splitting of the achieved matrix.
        rotation_angle: f64,
        /// Distance to the closed-form rotation `[[cos γ, −sin γ], [sin γ, cos γ]]`.
        rotation_distance: f64,
        hadamard_distance_raw: f64,
        hadamard_distance_corrected: f64,
        basis_correction: &'static str,
        basis_convention_mismatch: bool,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Defect `‖U†U − I‖_max` of the route's raw matrix, before any
    /// projection onto the unitary group.
    pub unitarity_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wilson_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge_patches: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leakage: Option<f64>,
    /// `∫E dt` removed from each propagated state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamical_phases: Option<Vec<f64>>,
}

/// Conventions every report carries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conventions {
    pub hbar: f64,
    pub frequency_units: &'static str,
    pub orientation: &'static str,
    pub holonomy_index: &'static str,
    pub distance: &'static str,
    pub basis_order: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_to_bit: Option<&'static str>,
}

impl Conventions {
    pub fn new(basis: &[&str]) -> Self {
        Conventions {
            hbar: 1.0,
            frequency_units: "angular frequency (rad per unit time)",
            orientation: "loops are traversed with the azimuthal or drive phase increasing from 0 to 2*pi",
            holonomy_index: "U[l][n] = <n|psi_l(T)>, psi_l(0) = frame vector l, dynamical phase removed",
            distance: "min over global phase of the max-abs entry difference",
            basis_order: basis.iter().map(|s| s.to_string()).collect(),
            spin_to_bit: None,
        }
    }
}

/// A synthesized gate compared with its target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateReport {
    pub gate: GateKind,
    pub route: Route,
    #[serde(serialize_with = "serialize_matrix")]
    pub achieved: CMatrix,
    #[serde(serialize_with = "serialize_matrix")]
    pub target: CMatrix,
    /// Up-to-global-phase distance between achieved and target.
    pub distance: f64,
    pub phases: GeometricPhases,
    pub diagnostics: Diagnostics,
    pub conventions: Conventions,
}

/// Rows of `[re, im]` pairs.
pub fn matrix_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn serialize_matrix<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
    matrix_pairs(m).serialize(s)
}

/// `e^{iφ}` on the diagonal.
pub fn phase_diagonal(phases: &[f64]) -> CMatrix {
    let mut m = CMatrix::zeros(phases.len(), phases.len());
    for (k, &p) in phases.iter().enumerate() {
        m[(k, k)] = c(p.cos(), p.sin());
    }
    m
}

/// Nearest unitary to a route's raw matrix, and the raw defect.
fn unitarize(raw: &CMatrix) -> (CMatrix, f64) {
    let defect = unitarity_defect(raw);
    (polar_unitary(raw).0, defect)
}
