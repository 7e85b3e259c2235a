//! Metric names each scenario reports. Thresholds are validated against
//! these, and the runner fills columns in the same order.

use geophase::Route;

use crate::config::Scenario;

/// Per-route metrics of a gate point.
pub fn route_metrics(kind: &str) -> &'static [&'static str] {
    match kind {
        "phase_gate" => &["distance", "alpha", "alpha_error", "gamma_aligned"],
        "cphase" => &["distance", "delta_gamma", "beta"],
        "hadamard" => &["distance", "distance_corrected", "rotation_angle", "rotation_distance"],
        _ => &[],
    }
}

/// Metric columns of a gate point, in table order.
pub fn gate_columns(kind: &str, routes: &[Route]) -> Vec<String> {
    let mut cols = Vec::new();
    if kind == "cphase" {
        cols.push("omega1".to_string());
    }
    for r in routes {
        for m in route_metrics(kind) {
            cols.push(format!("{}.{m}", r.name()));
        }
        if *r == Route::Oracle {
            cols.push("oracle.leakage".to_string());
        }
    }
    if routes.len() > 1 {
        cols.push("route_disagreement".to_string());
    }
    cols.push("unitarity_defect".to_string());
    cols
}

pub const CONVERGENCE_COLUMNS: [&str; 3] = ["steps", "distance", "ratio"];
pub const CONVERGENCE_SUMMARY: [&str; 6] = [
    "max_distance",
    "min_ratio",
    "max_ratio",
    "min_order",
    "unitarity_defect",
    "reverse_inverse_error",
];

pub const DEFORMATION_COLUMNS: [&str; 10] = [
    "sample",
    "seed",
    "offset",
    "gamma_circle",
    "gamma_raw",
    "gamma_renormalized",
    "raw_shift",
    "renormalized_shift",
    "solid_angle_raw",
    "solid_angle_renormalized",
];
pub const DEFORMATION_SUMMARY: [&str; 2] = ["max_renormalized_shift", "min_raw_shift"];

pub const AMPLITUDE_COLUMNS: [&str; 5] = ["omega1", "delta_gamma", "gamma_plus", "gamma_minus", "beta"];
pub const AMPLITUDE_SUMMARY: [&str; 6] = [
    "argmax_omega1",
    "max_abs_delta_gamma",
    "optimal_omega1",
    "optimum_grid_offset",
    "interior_maximum",
    "sign_changes",
];

/// Every metric a threshold may name for this scenario.
pub fn names(s: &Scenario) -> Vec<String> {
    let own = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    match s {
        Scenario::PhaseGate(p) => gate_columns(s.kind(), &p.routes),
        Scenario::Cphase(c) => gate_columns(s.kind(), &c.routes),
        Scenario::Hadamard(h) => gate_columns(s.kind(), &h.routes),
        Scenario::WilsonConvergence(_) => [own(&CONVERGENCE_COLUMNS[1..]), own(&CONVERGENCE_SUMMARY)].concat(),
        Scenario::DeformationInvariance(_) => [own(&DEFORMATION_COLUMNS[2..]), own(&DEFORMATION_SUMMARY)].concat(),
        Scenario::AmplitudeSweep(_) => [own(&AMPLITUDE_COLUMNS[1..]), own(&AMPLITUDE_SUMMARY)].concat(),
    }
}
