use std::f64::consts::PI;

use geophase::gates::{
    cphase_gate, hadamard_gate, optimal_amplitude, phase_gate, GeometricPhases, RabiDrive, TwoSpinParams,
    DEFAULT_COS_HOLD,
};
use geophase::{unitary_distance, GateReport, PhaseMode, Route, RouteOptions};

fn sixty_degree_drive() -> RabiDrive {
    RabiDrive::new(1.0, 0.0, 3f64.sqrt()).unwrap()
}

fn two_spin() -> (TwoSpinParams, f64, f64) {
    let p = TwoSpinParams::new(3.0, 1.0, 1.0 / PI).unwrap();
    let omega = 1.0;
    let w1 = optimal_amplitude(&p, omega).unwrap().omega1;
    (p, omega, w1)
}

fn gate(name: &str, route: Route, opts: &RouteOptions) -> GateReport {
    match name {
        "phase" => phase_gate(&sixty_degree_drive(), 1, route, opts),
        "cphase" => {
            let (p, w, w1) = two_spin();
            cphase_gate(&p, w, w1, route, opts)
        }
        "hadamard" => hadamard_gate(DEFAULT_COS_HOLD.acos(), route, opts),
        _ => unreachable!(),
    }
    .unwrap()
}

fn d(a: &GateReport, b: &GateReport) -> f64 {
    unitary_distance(&a.achieved, &b.achieved, PhaseMode::UpToGlobalPhase).unwrap()
}

#[test]
fn wilson_agrees_with_closed_form() {
    let opts = RouteOptions::default();
    for name in ["phase", "cphase", "hadamard"] {
        let closed = gate(name, Route::ClosedForm, &opts);
        let wilson = gate(name, Route::Wilson, &opts);
        assert!(d(&closed, &wilson) <= 1e-5, "{name}: {}", d(&closed, &wilson));
        assert!(wilson.diagnostics.unitarity_defect <= 1e-8);
    }
}

#[test]
fn oracle_agrees_with_wilson_within_adiabatic_budget() {
    let wilson_opts = RouteOptions::default();
    for name in ["phase", "cphase", "hadamard"] {
        let wilson = gate(name, Route::Wilson, &wilson_opts);
        let mut last = f64::INFINITY;
        for (t, budget) in [(1e3, 5e-2), (1e4, 1e-2)] {
            let opts = RouteOptions {
                total_time: t,
                ..RouteOptions::default()
            };
            let oracle = gate(name, Route::Oracle, &opts);
            let dist = d(&oracle, &wilson);
            assert!(dist <= budget, "{name} at T={t}: {dist}");
            assert!(dist < last, "{name}: no improvement at T={t}");
            last = dist;
        }
    }
}

#[test]
fn phase_gate_follows_the_solid_angle_law() {
    let opts = RouteOptions::default();
    for theta in [PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0] {
        // Unit effective field tilted by θ.
        let drive = RabiDrive::new(theta.cos(), 0.0, theta.sin()).unwrap();
        let r = phase_gate(&drive, 1, Route::Wilson, &opts).unwrap();
        let GeometricPhases::Phase {
            gamma_aligned, alpha, ..
        } = r.phases
        else {
            panic!("wrong phase block")
        };
        assert!((gamma_aligned + PI * (1.0 - theta.cos())).abs() <= 1e-6);
        assert!((alpha - 2.0 * PI * (1.0 - theta.cos())).abs() <= 2e-6);
    }
}

#[test]
fn leakage_shrinks_as_the_loop_slows() {
    let leak = |t: f64| {
        let opts = RouteOptions {
            total_time: t,
            ..RouteOptions::default()
        };
        gate("hadamard", Route::Oracle, &opts).diagnostics.leakage.unwrap()
    };
    let (fast, slow) = (leak(1e2), leak(1e3));
    assert!(slow < fast, "{fast} -> {slow}");
    assert!(slow < 1e-3);
}

#[test]
fn dynamical_phase_scales_with_duration() {
    // Unit gap: the levels sit at ±1/2, so |∫E dt| = T/2.
    let drive = RabiDrive::new(0.5, 0.0, 0.75f64.sqrt()).unwrap();
    for t in [1e3, 2e3] {
        let opts = RouteOptions {
            total_time: t,
            ..RouteOptions::default()
        };
        let r = phase_gate(&drive, 1, Route::Oracle, &opts).unwrap();
        let dynamical = r.diagnostics.dynamical_phases.unwrap();
        assert!((dynamical[0].abs() - 0.5 * t).abs() < 1e-9 * t, "{dynamical:?}");
        assert!((dynamical[0] + dynamical[1]).abs() < 1e-9 * t);
        let GeometricPhases::Phase { gamma_aligned, .. } = r.phases else {
            panic!()
        };
        // Geometric part stays put while the dynamical part doubles.
        assert!((gamma_aligned + PI * 0.5).abs() < 2e-2);
    }
}

#[test]
fn reports_serialize_with_conventions() {
    let r = gate("hadamard", Route::ClosedForm, &RouteOptions::default());
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["gate"], "hadamard");
    assert_eq!(v["route"], "closed_form");
    let conv = &v["conventions"];
    for key in ["hbar", "orientation", "basis_order", "distance"] {
        assert!(!conv[key].is_null(), "missing {key}");
    }
    let target = v["target"].as_array().unwrap();
    assert_eq!(target.len(), 2);
    let entry = target[1][1].as_array().unwrap();
    assert_eq!(entry.len(), 2);
    assert!((entry[0].as_f64().unwrap() + 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(entry[1].as_f64().unwrap(), 0.0);
    assert_eq!(v["phases"]["basis_convention_mismatch"], true);
}

#[test]
fn identity_report_has_zero_distance() {
    let drive = RabiDrive::new(2.0, 2.0, 1.0).unwrap();
    let r = phase_gate(&drive, 0, Route::ClosedForm, &RouteOptions::default()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["distance"].as_f64(), Some(0.0));
    assert!(v["conventions"].is_object());
}
