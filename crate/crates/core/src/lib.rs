//! Berry phases and non-Abelian holonomies of small parametrized
//! Hamiltonians, and the holonomic gates built from them.
//!
//! Three independent routes compute the same holonomy: closed-form
//! expressions, a path-ordered Wilson loop of the gauge connection
//! ([`holonomy`]), and brute-force integration of the time-dependent
//! Schrödinger equation ([`oracle`]). The [`gates`] module assembles phase,
//! conditional-phase and rotation gates on top of them.
//!
//! Units: ħ = 1; every frequency is an angular frequency.

pub mod deform;
pub mod error;
pub mod frames;
pub mod gates;
pub mod holonomy;
pub mod numerics;
pub mod oracle;

pub use error::{Error, Result};
pub use frames::{
    BlochFamily, ClusterSelector, Frame, HamiltonianFamily, ParameterPath, ParameterPoint, TripodFamily, TwoSpinFamily,
};
pub use gates::{GateReport, Route, RouteOptions};
pub use holonomy::{abelian_phase, wilson_loop, Holonomy, SolidAngle, WilsonOptions};
pub use numerics::{unitary_distance, CMatrix, CVector, PhaseMode};
pub use oracle::{extract_holonomy, OracleOptions, OracleResult, Schedule};
