//! Brute-force holonomies from the time-dependent Schrödinger equation.
//!
//! The loop is traversed in time `T` (`λ(t) = λ(t/T)`), each step applying
//! the exact exponential of the Hamiltonian frozen at the step midpoint.
//! Projecting the evolved states onto the starting frame and removing the
//! dynamical phase `∫E dt` leaves the holonomy plus a non-adiabatic error
//! that shrinks as `T` grows.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frames::{select_frame, ClusterSelector, HamiltonianFamily, ParameterPath};
use crate::holonomy::base_frame;
use crate::numerics::{c, eigh, spectral_phase, CMatrix, CVector};

/// Smallest admissible number of time steps.
pub const MIN_TIME_STEPS: usize = 1000;
/// Time steps per unit of `T / 2π` in the default schedule.
pub const STEPS_PER_PERIOD: f64 = 200.0;
/// Relative norm change that aborts a propagation.
pub const NORM_DRIFT_TOL: f64 = 1e-6;
pub const DEFAULT_LEAKAGE_BUDGET: f64 = 1e-2;
const NORM_CHECK_INTERVAL: usize = 1024;

/// Traversal of a path in time: `t ∈ [0, T]` on a uniform grid.
#[derive(Debug, Clone)]
pub struct Schedule {
    pub path: ParameterPath,
    pub total_time: f64,
    pub steps: usize,
}

impl Schedule {
    /// Uses `max(1000, ⌈200 T / 2π⌉)` steps.
    pub fn new(path: ParameterPath, total_time: f64) -> Result<Self> {
        if !(total_time > 0.0 && total_time.is_finite()) {
            return Err(Error::OutOfRange {
                name: "total_time",
                value: total_time,
                range: "(0, inf)",
            });
        }
        let steps = ((STEPS_PER_PERIOD * total_time / (2.0 * PI)).ceil() as usize).max(MIN_TIME_STEPS);
        Ok(Schedule {
            path,
            total_time,
            steps,
        })
    }

    pub fn with_steps(mut self, steps: usize) -> Result<Self> {
        if steps < MIN_TIME_STEPS {
            return Err(Error::OutOfRange {
                name: "time_steps",
                value: steps as f64,
                range: "[1000, inf)",
            });
        }
        self.steps = steps;
        Ok(self)
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.steps as f64
    }

    /// Time of grid node `i`.
    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt()
    }
}

/// Evolves one normalized state over the schedule.
pub fn propagate(family: &dyn HamiltonianFamily, schedule: &Schedule, initial: &CVector) -> Result<CVector> {
    let m = CMatrix::from_column_slice(initial.len(), 1, initial.as_slice());
    let out = propagate_columns(family, schedule, &m)?;
    Ok(out.column(0).into_owned())
}

/// Evolves every column of `initial` (each normalized) over the schedule.
pub fn propagate_columns(family: &dyn HamiltonianFamily, schedule: &Schedule, initial: &CMatrix) -> Result<CMatrix> {
    if initial.nrows() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows", family.dim()),
            got: format!("{} rows", initial.nrows()),
        });
    }
    for col in initial.column_iter() {
        let norm = col.norm();
        if !((norm - 1.0).abs() <= 1e-10) {
            return Err(Error::OutOfRange {
                name: "initial_norm",
                value: norm,
                range: "1 +/- 1e-10",
            });
        }
    }
    let m = schedule.steps;
    let dt = schedule.dt();
    let mut psi = initial.clone();
    for i in 0..m {
        let s_mid = (i as f64 + 0.5) / m as f64;
        let point = schedule.path.at(s_mid);
        let h = crate::frames::eval(family, &point)?;
        let step = spectral_phase(&eigh(&h)?, -dt);
        psi = step * psi;
        if (i + 1) % NORM_CHECK_INTERVAL == 0 || i + 1 == m {
            check_norms(&psi, i)?;
        }
    }
    Ok(psi)
}

fn check_norms(psi: &CMatrix, step: usize) -> Result<f64> {
    let mut drift: f64 = 0.0;
    for col in psi.column_iter() {
        let norm = col.norm();
        if !norm.is_finite() {
            return Err(Error::StepUnstable(step));
        }
        drift = drift.max((norm - 1.0).abs());
    }
    if drift > NORM_DRIFT_TOL {
        return Err(Error::NormDrift(drift));
    }
    Ok(drift)
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub leakage_budget: f64,
    /// Gauge of the starting frame; same semantics as
    /// [`WilsonOptions::gauge_reference`](crate::holonomy::WilsonOptions).
    pub gauge_reference: Option<CMatrix>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            leakage_budget: DEFAULT_LEAKAGE_BUDGET,
            gauge_reference: None,
        }
    }
}

impl OracleOptions {
    pub fn with_gauge_reference(mut self, reference: CMatrix) -> Self {
        self.gauge_reference = Some(reference);
        self
    }

    pub fn with_leakage_budget(mut self, budget: f64) -> Self {
        self.leakage_budget = budget;
        self
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// `U[(l, n)] = ⟨n|ψ_l(T)⟩ e^{i∫E dt}`; only approximately unitary.
    pub holonomy: CMatrix,
    /// `1 −` mean squared projection of the final states onto the frame.
    pub leakage: f64,
    /// Leakage of each propagated frame vector.
    pub column_leakage: Vec<f64>,
    /// `∫E dt` over the traversal.
    pub dynamical_phase: f64,
    pub total_time: f64,
    pub steps: usize,
    /// Largest `|‖ψ‖ − 1|` at the end of the evolution.
    pub norm_drift: f64,
    pub base_frame: CMatrix,
}

/// Propagates each vector of the starting frame around the loop and
/// projects back onto it with the dynamical phase removed.
pub fn extract_holonomy(
    family: &dyn HamiltonianFamily,
    schedule: &Schedule,
    selector: ClusterSelector,
    opts: &OracleOptions,
) -> Result<OracleResult> {
    schedule.path.require_closed()?;
    let start = base_frame(family, &schedule.path, selector, opts.gauge_reference.as_ref())?;
    let f0 = start.vectors.clone();

    let m = schedule.steps;
    let mut target = start.energy;
    let mut energy_integral = 0.5 * start.energy;
    for i in 1..=m {
        let point = schedule.path.at(i as f64 / m as f64);
        let frame = select_frame(family, &point, selector.retarget(target), None)?;
        target = frame.energy;
        energy_integral += if i == m { 0.5 * frame.energy } else { frame.energy };
    }
    let dynamical_phase = energy_integral * schedule.dt();

    let psi = propagate_columns(family, schedule, &f0)?;
    let norm_drift = check_norms(&psi, m)?;
    let overlaps = f0.adjoint() * &psi;
    let holonomy = overlaps.transpose() * c(dynamical_phase.cos(), dynamical_phase.sin());

    let column_leakage: Vec<f64> = overlaps.column_iter().map(|col| 1.0 - col.norm_squared()).collect();
    let leakage = column_leakage.iter().sum::<f64>() / column_leakage.len() as f64;
    if leakage > opts.leakage_budget {
        return Err(Error::ExcessLeakage {
            leakage,
            budget: opts.leakage_budget,
        });
    }
    Ok(OracleResult {
        holonomy,
        leakage,
        column_leakage,
        dynamical_phase,
        total_time: schedule.total_time,
        steps: m,
        norm_drift,
        base_frame: f0,
    })
}
