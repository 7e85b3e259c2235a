use std::f64::consts::PI;

use super::{phase_diagonal, unitarize, Diagnostics, GateKind, GateReport, GeometricPhases, Route, RouteOptions};
use crate::error::{Error, Result};
use crate::frames::{BlochFamily, ClusterSelector, ParameterPath};
use crate::holonomy::abelian_phase;
use crate::numerics::{unitary_distance, PhaseMode};
use crate::oracle::{extract_holonomy, OracleOptions, Schedule};

/// A qubit of transition frequency `ω₀` driven at `ω` with amplitude `ω₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiDrive {
    pub omega0: f64,
    pub omega: f64,
    pub omega1: f64,
}

impl RabiDrive {
    pub fn new(omega0: f64, omega: f64, omega1: f64) -> Result<Self> {
        for (name, v) in [("omega0", omega0), ("omega", omega)] {
            if !v.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "finite",
                });
            }
        }
        if !(omega1 >= 0.0 && omega1.is_finite()) {
            return Err(Error::OutOfRange {
                name: "omega1",
                value: omega1,
                range: "[0, inf)",
            });
        }
        Ok(RabiDrive { omega0, omega, omega1 })
    }

    pub fn detuning(&self) -> f64 {
        self.omega0 - self.omega
    }

    /// Splitting `√((ω₀−ω)² + ω₁²)` of the rotating-frame levels.
    pub fn effective_gap(&self) -> f64 {
        self.detuning().hypot(self.omega1)
    }

    fn cos_theta(&self) -> Result<f64> {
        let r = self.effective_gap();
        if r == 0.0 {
            return Err(Error::UndefinedCone);
        }
        Ok((self.detuning() / r).clamp(-1.0, 1.0))
    }
}

/// Polar angle of the rotating-frame field, `cos θ = (ω₀−ω)/√((ω₀−ω)² + ω₁²)`.
pub fn cone_angle(drive: &RabiDrive) -> Result<f64> {
    Ok(drive.cos_theta()?.acos())
}

/// Phase gate from `loops` turns of the drive phase.
///
/// In the basis (aligned, anti-aligned) with the effective field the gate is
/// `diag(e^{iγ₊·loops}, e^{iγ₋·loops})` with `γ± = ∓π(1 − cos θ)`. The target
/// is `diag(1, e^{iα})`, `α = 2π(1 − cos θ)·loops`.
///
/// The numerical routes run on the rotating-frame Hamiltonian
/// `((ω₀−ω)/2)σ_z + (ω₁/2)(cos φ σ_x + sin φ σ_y)`. Oracle phases are
/// principal values.
pub fn phase_gate(drive: &RabiDrive, loops: u32, route: Route, opts: &RouteOptions) -> Result<GateReport> {
    let cos_theta = drive.cos_theta()?;
    let theta = cos_theta.acos();
    let gap = drive.effective_gap();
    let alpha_target = 2.0 * PI * (1.0 - cos_theta) * loops as f64;

    let family = BlochFamily::new(gap);
    let path = ParameterPath::azimuthal_loop(theta);
    let selectors = [ClusterSelector::level(0.5 * gap), ClusterSelector::level(-0.5 * gap)];
    let mut diagnostics = Diagnostics::default();

    let [g_al, g_anti] = match route {
        Route::ClosedForm => {
            let g = PI * (1.0 - cos_theta);
            [-g, g]
        }
        Route::Wilson => {
            diagnostics.wilson_steps = Some(opts.wilson_steps);
            [
                abelian_phase(&family, &path, selectors[0], opts.wilson_steps)?,
                abelian_phase(&family, &path, selectors[1], opts.wilson_steps)?,
            ]
        }
        Route::Oracle => {
            let mut schedule = Schedule::new(path, opts.total_time)?;
            if let Some(m) = opts.time_steps {
                schedule = schedule.with_steps(m)?;
            }
            let oracle_opts = OracleOptions::default().with_leakage_budget(opts.leakage_budget);
            let mut gammas = [0.0; 2];
            let mut leakage = 0.0;
            let mut dynamical = Vec::new();
            for (g, sel) in gammas.iter_mut().zip(selectors) {
                let r = extract_holonomy(&family, &schedule, sel, &oracle_opts)?;
                let (u, defect) = unitarize(&r.holonomy);
                *g = u[(0, 0)].arg();
                leakage += 0.5 * r.leakage;
                dynamical.push(r.dynamical_phase);
                diagnostics.unitarity_defect = diagnostics.unitarity_defect.max(defect);
            }
            diagnostics.total_time = Some(schedule.total_time);
            diagnostics.time_steps = Some(schedule.steps);
            diagnostics.leakage = Some(leakage);
            diagnostics.dynamical_phases = Some(dynamical);
            gammas
        }
    };

    let n = loops as f64;
    let achieved = phase_diagonal(&[g_al * n, g_anti * n]);
    let target = phase_diagonal(&[0.0, alpha_target]);
    let distance = unitary_distance(&achieved, &target, PhaseMode::UpToGlobalPhase)?;
    Ok(GateReport {
        gate: GateKind::Phase,
        route,
        achieved,
        target,
        distance,
        phases: GeometricPhases::Phase {
            cone_angle: theta,
            loops,
            gamma_aligned: g_al,
            gamma_anti_aligned: g_anti,
            alpha: (g_anti - g_al) * n,
            alpha_target,
        },
        diagnostics,
        conventions: GateKind::Phase.conventions(),
    })
}
