use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{unitarize, Diagnostics, GateKind, GateReport, GeometricPhases, Route, RouteOptions};
use crate::error::{Error, Result};
use crate::frames::{tripod_coupling_hamiltonian, AnalyticFrames, ClusterSelector, ParameterPath, TripodFamily};
use crate::holonomy::{rotation_angle, wilson_loop, WilsonOptions};
use crate::numerics::{cr, unitary_distance, CMatrix, CVector, PhaseMode};
use crate::oracle::{extract_holonomy, OracleOptions, Schedule};

/// `cos θ_hold` giving a rotation by `π/4`.
pub const DEFAULT_COS_HOLD: f64 = 0.125;

const BASIS_CORRECTION: &str = "right-multiply the rotation by diag(1, -1)";
const MISMATCH_TOL: f64 = 1e-6;

/// Tripod couplings `ω₀ = B sinθ cosφ`, `ω₁ = B sinθ sinφ`, `ω_a = B cosθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripodParams {
    pub b: f64,
    pub theta: f64,
    pub phi: f64,
}

impl TripodParams {
    pub fn new(b: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::OutOfRange {
                name: "B",
                value: b,
                range: "(0, inf)",
            });
        }
        Ok(TripodParams { b, theta, phi })
    }

    pub fn omega0(&self) -> f64 {
        self.b * self.theta.sin() * self.phi.cos()
    }

    pub fn omega1(&self) -> f64 {
        self.b * self.theta.sin() * self.phi.sin()
    }

    pub fn omega_a(&self) -> f64 {
        self.b * self.theta.cos()
    }

    /// Splitting `√(ω₀² + ω₁² + ω_a²)` of the bright levels from zero.
    pub fn gap(&self) -> f64 {
        let (x, y, z) = (self.omega0(), self.omega1(), self.omega_a());
        (x * x + y * y + z * z).sqrt()
    }
}

/// Tripod Hamiltonian in the basis `(|0⟩, |1⟩, |a⟩, |b⟩)`.
pub fn tripod_hamiltonian(p: &TripodParams) -> CMatrix {
    tripod_coupling_hamiltonian(p.omega0(), p.omega1(), p.omega_a())
}

/// The zero-energy states
/// `χ₁ = sinφ|0⟩ − cosφ|1⟩` and
/// `χ₂ = cosθ cosφ|0⟩ + cosθ sinφ|1⟩ − sinθ|a⟩`.
pub fn dark_states(theta: f64, phi: f64) -> (CVector, CVector) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (
        CVector::from_vec(vec![cr(sp), cr(-cp), cr(0.0), cr(0.0)]),
        CVector::from_vec(vec![cr(ct * cp), cr(ct * sp), cr(-st), cr(0.0)]),
    )
}

/// `(χ₁, χ₂)` as the columns of a 4×2 matrix.
pub fn dark_frame(theta: f64, phi: f64) -> CMatrix {
    let (a, b) = dark_states(theta, phi);
    CMatrix::from_columns(&[a, b])
}

/// Dark frames over `(θ, φ)` with their exact derivatives.
pub fn tripod_analytic_frames() -> AnalyticFrames {
    AnalyticFrames::new(|p| dark_frame(p[0], p[1])).with_derivative(|p, k| {
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        let (d1, d2) = if k == 0 {
            ([0.0; 4], [-st * cp, -st * sp, -ct, 0.0])
        } else {
            ([cp, sp, 0.0, 0.0], [-ct * sp, ct * cp, 0.0, 0.0])
        };
        CMatrix::from_columns(&[
            CVector::from_iterator(4, d1.into_iter().map(cr)),
            CVector::from_iterator(4, d2.into_iter().map(cr)),
        ])
    })
}

/// `[[cos γ, −sin γ], [sin γ, cos γ]]`.
pub fn rotation(gamma: f64) -> CMatrix {
    let (s, c) = gamma.sin_cos();
    CMatrix::from_row_slice(2, 2, &[cr(c), cr(-s), cr(s), cr(c)])
}

/// `(1/√2)[[1, 1], [1, −1]]`.
pub fn hadamard() -> CMatrix {
    let h = cr(FRAC_1_SQRT_2);
    CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// Rotation gate from one full turn of `φ` at fixed `θ_hold`, compared with
/// the Hadamard gate.
///
/// The rotation angle is `γ = 2π cos θ_hold`. At `γ = π/4` the rotation
/// equals the Hadamard only after a reflection of the second basis vector;
/// the report gives the distance both before and after that correction.
pub fn hadamard_gate(theta_hold: f64, route: Route, opts: &RouteOptions) -> Result<GateReport> {
    if !theta_hold.is_finite() {
        return Err(Error::NonFinite);
    }
    let gamma = 2.0 * PI * theta_hold.cos();
    let family = TripodFamily::new(opts.tripod_coupling);
    let path = ParameterPath::azimuthal_loop(theta_hold);
    let selector = ClusterSelector::new(0.0, 2);
    let reference = dark_frame(theta_hold, 0.0);
    let mut diagnostics = Diagnostics::default();

    let achieved = match route {
        Route::ClosedForm => rotation(gamma),
        Route::Wilson => {
            let w = WilsonOptions::new(opts.wilson_steps).with_gauge_reference(reference);
            let h = wilson_loop(&family, &path, selector, &w)?;
            diagnostics.unitarity_defect = h.unitarity_defect;
            diagnostics.wilson_steps = Some(h.steps);
            diagnostics.gauge_patches = Some(h.patches);
            h.matrix
        }
        Route::Oracle => {
            let mut schedule = Schedule::new(path, opts.total_time)?;
            if let Some(m) = opts.time_steps {
                schedule = schedule.with_steps(m)?;
            }
            let o = OracleOptions::default()
                .with_leakage_budget(opts.leakage_budget)
                .with_gauge_reference(reference);
            let r = extract_holonomy(&family, &schedule, selector, &o)?;
            let (u, defect) = unitarize(&r.holonomy);
            diagnostics.unitarity_defect = defect;
            diagnostics.total_time = Some(schedule.total_time);
            diagnostics.time_steps = Some(schedule.steps);
            diagnostics.leakage = Some(r.leakage);
            diagnostics.dynamical_phases = Some(vec![r.dynamical_phase]);
            u
        }
    };

    let target = hadamard();
    let raw = unitary_distance(&achieved, &target, PhaseMode::UpToGlobalPhase)?;
    let reflected = &achieved * CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), cr(-1.0)]));
    let corrected = unitary_distance(&reflected, &target, PhaseMode::UpToGlobalPhase)?;
    Ok(GateReport {
        gate: GateKind::Hadamard,
        route,
        distance: raw,
        phases: GeometricPhases::Rotation {
            gamma,
            rotation_angle: rotation_angle(&achieved)?,
            rotation_distance: unitary_distance(&achieved, &rotation(gamma), PhaseMode::UpToGlobalPhase)?,
            hadamard_distance_raw: raw,
            hadamard_distance_corrected: corrected,
            basis_correction: BASIS_CORRECTION,
            basis_convention_mismatch: raw > MISMATCH_TOL && corrected < raw,
        },
        achieved,
        target,
        diagnostics,
        conventions: GateKind::Hadamard.conventions(),
    })
}
