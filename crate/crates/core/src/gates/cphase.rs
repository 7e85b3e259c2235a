use std::f64::consts::PI;

use serde::Serialize;

use super::{phase_diagonal, unitarize, Diagnostics, GateKind, GateReport, GeometricPhases, Route, RouteOptions};
use crate::error::{Error, Result};
use crate::frames::{ClusterSelector, ParameterPath, TwoSpinFamily, TWO_SPIN_BASIS};
use crate::holonomy::{abelian_phase_with, WilsonOptions};
use crate::numerics::{cr, unitary_distance, CMatrix, PhaseMode};
use crate::oracle::{extract_holonomy, OracleOptions, Schedule};

/// Two spins with transition frequencies `ω_a > ω_b` and coupling
/// `2πJ S_az S_bz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub j: f64,
}

impl TwoSpinParams {
    pub fn new(omega_a: f64, omega_b: f64, j: f64) -> Result<Self> {
        if !(omega_a.is_finite() && omega_b.is_finite() && j.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(omega_a > omega_b) {
            return Err(Error::OutOfRange {
                name: "omega_a - omega_b",
                value: omega_a - omega_b,
                range: "(0, inf)",
            });
        }
        Ok(TwoSpinParams { omega_a, omega_b, j })
    }

    pub fn pi_j(&self) -> f64 {
        PI * self.j
    }

    pub fn family(&self) -> TwoSpinFamily {
        TwoSpinFamily::new(self.omega_a, self.omega_b, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub label: &'static str,
    pub energy: f64,
}

/// Undriven levels in the order `(↑↑, ↑↓, ↓↑, ↓↓)`.
pub fn two_spin_levels(p: &TwoSpinParams) -> [Level; 4] {
    let (a, b, pj) = (p.omega_a, p.omega_b, p.pi_j());
    let energies = [
        (a + b + pj) / 2.0,
        (a - b - pj) / 2.0,
        (-a + b - pj) / 2.0,
        (-a - b + pj) / 2.0,
    ];
    let mut out = [Level { label: "", energy: 0.0 }; 4];
    for (k, e) in energies.into_iter().enumerate() {
        out[k] = Level {
            label: TWO_SPIN_BASIS[k],
            energy: e,
        };
    }
    out
}

/// Spin-`a` transition frequencies `(ω₊, ω₋)` with spin `b` up and down.
pub fn transition_frequencies(p: &TwoSpinParams) -> (f64, f64) {
    let l = two_spin_levels(p);
    (l[0].energy - l[2].energy, l[1].energy - l[3].energy)
}

/// Rotating-frame levels at drive `(ω, ω₁)` in the order `(↑↑, ↑↓, ↓↑, ↓↓)`,
/// where "spin `a` up" is the level aligned with its effective field.
pub fn rotating_frame_levels(p: &TwoSpinParams, omega: f64, omega1: f64) -> [f64; 4] {
    let r_plus = (p.omega_a + p.pi_j() - omega).hypot(omega1);
    let r_minus = (p.omega_a - p.pi_j() - omega).hypot(omega1);
    let half_b = 0.5 * p.omega_b;
    [
        half_b + 0.5 * r_plus,
        -half_b + 0.5 * r_minus,
        half_b - 0.5 * r_plus,
        -half_b - 0.5 * r_minus,
    ]
}

/// Berry phases of spin `a` conditioned on spin `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalPhases {
    pub cos_theta_plus: f64,
    pub cos_theta_minus: f64,
    /// `−π(1 − cos θ₊)`, spin `a` up, spin `b` up.
    pub gamma_plus: f64,
    /// `−π(1 − cos θ₋)`, spin `a` up, spin `b` down.
    pub gamma_minus: f64,
    pub delta_gamma: f64,
}

impl ConditionalPhases {
    /// Phases of `(↑↑, ↑↓, ↓↑, ↓↓)`; flipping spin `a` flips the sign.
    pub fn level_phases(&self) -> [f64; 4] {
        [self.gamma_plus, self.gamma_minus, -self.gamma_plus, -self.gamma_minus]
    }

    /// `2π(cos θ₊ − cos θ₋)`.
    pub fn beta(&self) -> f64 {
        2.0 * PI * (self.cos_theta_plus - self.cos_theta_minus)
    }
}

fn cone_cos(detuning: f64, omega1: f64) -> Result<f64> {
    let r = detuning.hypot(omega1);
    if r == 0.0 {
        return Err(Error::UndefinedCone);
    }
    Ok(detuning / r)
}

pub fn conditional_phases(p: &TwoSpinParams, omega: f64, omega1: f64) -> Result<ConditionalPhases> {
    let (w_plus, w_minus) = (p.omega_a + p.pi_j(), p.omega_a - p.pi_j());
    let cos_theta_plus = cone_cos(w_plus - omega, omega1)?;
    let cos_theta_minus = cone_cos(w_minus - omega, omega1)?;
    let gamma_plus = -PI * (1.0 - cos_theta_plus);
    let gamma_minus = -PI * (1.0 - cos_theta_minus);
    Ok(ConditionalPhases {
        cos_theta_plus,
        cos_theta_minus,
        gamma_plus,
        gamma_minus,
        delta_gamma: gamma_plus - gamma_minus,
    })
}

/// `Δγ(ω₁)` at fixed drive frequency.
pub fn delta_gamma(p: &TwoSpinParams, omega: f64, omega1: f64) -> Result<f64> {
    Ok(conditional_phases(p, omega, omega1)?.delta_gamma)
}

/// Split of four level phases into `φ₀ + x_a·a + x_b·b + β·a·b` with bits
/// `a, b ∈ {0, 1}` and up = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseDecomposition {
    pub global: f64,
    pub local_a: f64,
    pub local_b: f64,
    pub beta: f64,
    /// `β` reduced to `[0, 2π)`.
    pub beta_mod_2pi: f64,
}

impl PhaseDecomposition {
    /// From phases ordered `(↑↑, ↑↓, ↓↑, ↓↓)`.
    pub fn from_level_phases(ph: [f64; 4]) -> Self {
        let [uu, ud, du, dd] = ph;
        let beta = uu - ud - du + dd;
        PhaseDecomposition {
            global: dd,
            local_a: ud - dd,
            local_b: du - dd,
            beta,
            beta_mod_2pi: beta.rem_euclid(2.0 * PI),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalAmplitude {
    pub omega1: f64,
    pub delta_gamma: f64,
}

const SCAN_POINTS_PER_DECADE: usize = 64;
const SCAN_DECADES: usize = 4;
const GOLDEN_REL_TOL: f64 = 1e-10;

/// Drive amplitude maximizing `|Δγ|` at drive frequency `ω`.
///
/// A log-spaced scan over four decades centred on `πJ` brackets the maximum,
/// then golden-section search refines it. Fails with
/// [`Error::NoInteriorMaximum`] when the scan peaks at either end.
pub fn optimal_amplitude(p: &TwoSpinParams, omega: f64) -> Result<OptimalAmplitude> {
    let scale = p.pi_j().abs();
    if scale == 0.0 {
        return Err(Error::NoInteriorMaximum);
    }
    let f = |x: f64| delta_gamma(p, omega, x).map(f64::abs);
    let n = SCAN_POINTS_PER_DECADE * SCAN_DECADES;
    let lo_exp = -(SCAN_DECADES as f64) / 2.0;
    let grid: Vec<f64> = (0..=n)
        .map(|i| scale * 10f64.powf(lo_exp + i as f64 / SCAN_POINTS_PER_DECADE as f64))
        .collect();
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("scan is non-empty");
    if best == 0 || best == n || values[best] == 0.0 {
        return Err(Error::NoInteriorMaximum);
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > GOLDEN_REL_TOL * 0.5 * (a + b) {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        }
    }
    let omega1 = 0.5 * (a + b);
    Ok(OptimalAmplitude {
        omega1,
        delta_gamma: delta_gamma(p, omega, omega1)?,
    })
}

/// Conditional-phase gate from one turn of the drive phase on spin `a`.
///
/// The target is the closed-form phase pattern, i.e. the pure conditional
/// phase `β` dressed with its local and global phases.
pub fn cphase_gate(
    p: &TwoSpinParams,
    omega: f64,
    omega1: f64,
    route: Route,
    opts: &RouteOptions,
) -> Result<GateReport> {
    let closed = conditional_phases(p, omega, omega1)?;
    let family = p.family();
    let path = ParameterPath::phase_loop(vec![omega, omega1], "drive phase loop");
    let energies = rotating_frame_levels(p, omega, omega1);
    let basis_vector = |k: usize| {
        let mut e = CMatrix::zeros(4, 1);
        e[(k, 0)] = cr(1.0);
        e
    };
    let mut diagnostics = Diagnostics::default();

    let phases = match route {
        Route::ClosedForm => closed.level_phases(),
        Route::Wilson => {
            diagnostics.wilson_steps = Some(opts.wilson_steps);
            let mut ph = [0.0; 4];
            for (k, slot) in ph.iter_mut().enumerate() {
                let w = WilsonOptions::new(opts.wilson_steps).with_gauge_reference(basis_vector(k));
                *slot = abelian_phase_with(&family, &path, ClusterSelector::level(energies[k]), &w)?;
            }
            ph
        }
        Route::Oracle => {
            let mut schedule = Schedule::new(path, opts.total_time)?;
            if let Some(m) = opts.time_steps {
                schedule = schedule.with_steps(m)?;
            }
            let mut ph = [0.0; 4];
            let mut leakage = 0.0;
            let mut dynamical = Vec::new();
            for (k, slot) in ph.iter_mut().enumerate() {
                let o = OracleOptions::default()
                    .with_leakage_budget(opts.leakage_budget)
                    .with_gauge_reference(basis_vector(k));
                let r = extract_holonomy(&family, &schedule, ClusterSelector::level(energies[k]), &o)?;
                let (u, defect) = unitarize(&r.holonomy);
                *slot = u[(0, 0)].arg();
                leakage += 0.25 * r.leakage;
                dynamical.push(r.dynamical_phase);
                diagnostics.unitarity_defect = diagnostics.unitarity_defect.max(defect);
            }
            diagnostics.total_time = Some(schedule.total_time);
            diagnostics.time_steps = Some(schedule.steps);
            diagnostics.leakage = Some(leakage);
            diagnostics.dynamical_phases = Some(dynamical);
            ph
        }
    };

    let achieved = phase_diagonal(&phases);
    let target = phase_diagonal(&closed.level_phases());
    let distance = unitary_distance(&achieved, &target, PhaseMode::UpToGlobalPhase)?;
    let conventions = GateKind::ConditionalPhase.conventions();
    Ok(GateReport {
        gate: GateKind::ConditionalPhase,
        route,
        achieved,
        target,
        distance,
        phases: GeometricPhases::ConditionalPhase {
            cos_theta_plus: closed.cos_theta_plus,
            cos_theta_minus: closed.cos_theta_minus,
            gamma_plus: phases[0],
            gamma_minus: phases[1],
            delta_gamma: phases[0] - phases[1],
            level_phases: phases,
            decomposition: PhaseDecomposition::from_level_phases(phases),
            beta_target: closed.beta(),
        },
        diagnostics,
        conventions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::two_spin_hamiltonian;
    use crate::numerics::eigh;

    #[test]
    fn level_examples() {
        let p = TwoSpinParams::new(2.0, 1.0, 0.0).unwrap();
        let e: Vec<f64> = two_spin_levels(&p).iter().map(|l| l.energy).collect();
        assert_eq!(e, vec![1.5, 0.5, -0.5, -1.5]);
        let p = TwoSpinParams::new(2.0, 1.0, 0.2 / PI).unwrap();
        let e: Vec<f64> = two_spin_levels(&p).iter().map(|l| l.energy).collect();
        for (a, b) in e.iter().zip([1.6, 0.4, -0.6, -1.4]) {
            assert!((a - b).abs() < 1e-15);
        }
        let (wp, wm) = transition_frequencies(&p);
        assert!((wp - 2.2).abs() < 1e-15 && (wm - 1.8).abs() < 1e-15);
    }

    #[test]
    fn rejects_inverted_frequencies() {
        assert!(TwoSpinParams::new(1.0, 2.0, 0.1).is_err());
    }

    #[test]
    fn rotating_levels_match_spectrum() {
        let p = TwoSpinParams::new(5.0, 1.3, 0.4).unwrap();
        let h = two_spin_hamiltonian(p.omega_a, p.omega_b, p.j, 4.6, 0.7, 0.3);
        let mut expect = rotating_frame_levels(&p, 4.6, 0.7).to_vec();
        expect.sort_by(f64::total_cmp);
        let got = eigh(&h).unwrap().eigenvalues;
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn conditional_phase_examples() {
        let p = TwoSpinParams::new(2.0, 1.0, 0.0).unwrap();
        let c = conditional_phases(&p, 1.7, 0.4).unwrap();
        assert_eq!(c.cos_theta_plus, c.cos_theta_minus);
        assert_eq!(c.delta_gamma, 0.0);
        assert_eq!(c.beta(), 0.0);

        let p = TwoSpinParams::new(3.0, 1.0, 1.0 / PI).unwrap();
        let c = conditional_phases(&p, 3.0, 1.0).unwrap();
        let r = 0.5f64.sqrt();
        assert!((c.cos_theta_plus - r).abs() < 1e-15 && (c.cos_theta_minus + r).abs() < 1e-15);
        assert!((c.delta_gamma - PI * 2f64.sqrt()).abs() < 1e-14);
        assert!((c.beta() - 2.0 * PI * 2f64.sqrt()).abs() < 1e-13);
        let d = PhaseDecomposition::from_level_phases(c.level_phases());
        assert!((d.beta_mod_2pi - 2.0 * PI * (2f64.sqrt() - 1.0)).abs() < 1e-13);

        let far = conditional_phases(&p, 3.0, 1e9).unwrap();
        assert!(far.delta_gamma.abs() < 1e-8);
    }

    #[test]
    fn decomposition_reassembles_phases() {
        let ph = [0.3, -1.2, 2.5, 0.7];
        let d = PhaseDecomposition::from_level_phases(ph);
        let bits = [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (0.0, 0.0)];
        for (k, (a, b)) in bits.into_iter().enumerate() {
            let rebuilt = d.global + d.local_a * a + d.local_b * b + d.beta * a * b;
            assert!((rebuilt - ph[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn uncoupled_spins_have_no_optimum() {
        let p = TwoSpinParams::new(2.0, 1.0, 0.0).unwrap();
        assert_eq!(optimal_amplitude(&p, 2.0), Err(Error::NoInteriorMaximum));
    }

    #[test]
    fn midpoint_drive_decreases_monotonically() {
        let p = TwoSpinParams::new(3.0, 1.0, 1.0 / PI).unwrap();
        assert_eq!(optimal_amplitude(&p, 3.0), Err(Error::NoInteriorMaximum));
    }

    #[test]
    fn off_resonant_optimum_is_stationary() {
        // d₊ = 3πJ, d₋ = πJ with πJ = 1: maximum at ω₁² = (9 − 3^{2/3})/(3^{2/3} − 1).
        let p = TwoSpinParams::new(3.0, 1.0, 1.0 / PI).unwrap();
        let opt = optimal_amplitude(&p, 3.0 - 2.0).unwrap();
        let k = 3f64.powf(2.0 / 3.0);
        let exact = ((9.0 - k) / (k - 1.0)).sqrt();
        assert!((opt.omega1 - exact).abs() < 1e-7 * exact, "{} vs {exact}", opt.omega1);
        assert!(opt.omega1.is_sign_positive());
    }

    #[test]
    fn wilson_route_matches_closed_form() {
        let p = TwoSpinParams::new(3.0, 1.0, 1.0 / PI).unwrap();
        let r = cphase_gate(&p, 1.0, 2.5, Route::Wilson, &RouteOptions::default()).unwrap();
        assert!(r.distance < 1e-5, "{}", r.distance);
        let GeometricPhases::ConditionalPhase {
            decomposition,
            beta_target,
            ..
        } = r.phases
        else {
            panic!()
        };
        assert!((decomposition.beta - beta_target).abs() < 1e-5);
    }
}
