//! Smooth deformations of a cone loop on the Bloch sphere.
//!
//! A deformed loop is `θ(φ) = θ₀ + c + Σ_k (a_k cos kφ + b_k sin kφ)` over
//! one turn of `φ`. The offset `c` can be solved for so that the enclosed
//! solid angle `∫(1 − cos θ) dφ` equals that of the undeformed cone, in
//! which case the Berry phase is unchanged.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{BlochFamily, ClusterSelector, ParameterPath};
use crate::holonomy::{abelian_phase, cone_solid_angle, SolidAngle};

/// Quadrature nodes for the enclosed solid angle.
pub const SOLID_ANGLE_NODES: usize = 2048;
const OFFSET_TOL: f64 = 1e-14;

/// Fourier perturbation `δθ(φ) = Σ_k (a_k cos kφ + b_k sin kφ)`, `k ≥ 1`,
/// of a cone at polar angle `θ₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeDeformation {
    pub theta0: f64,
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

impl ConeDeformation {
    /// Rescales the raw coefficients so that `Σ|a_k| + |b_k| = amplitude`,
    /// which bounds `|δθ| ≤ amplitude`. The cone and any offset up to the
    /// amplitude must stay strictly inside `(0, π)`.
    pub fn new(theta0: f64, amplitude: f64, raw_cos: &[f64], raw_sin: &[f64]) -> Result<Self> {
        if !(theta0.is_finite() && amplitude.is_finite()) || raw_cos.iter().chain(raw_sin).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(amplitude >= 0.0) {
            return Err(Error::OutOfRange {
                name: "amplitude",
                value: amplitude,
                range: "[0, inf)",
            });
        }
        if !(theta0 - 2.0 * amplitude > 0.0 && theta0 + 2.0 * amplitude < PI) {
            return Err(Error::OutOfRange {
                name: "theta0",
                value: theta0,
                range: "(2 * amplitude, pi - 2 * amplitude)",
            });
        }
        let norm: f64 = raw_cos.iter().chain(raw_sin).map(|x| x.abs()).sum();
        let scale = if norm > 0.0 { amplitude / norm } else { 0.0 };
        Ok(ConeDeformation {
            theta0,
            cos_coeffs: raw_cos.iter().map(|x| x * scale).collect(),
            sin_coeffs: raw_sin.iter().map(|x| x * scale).collect(),
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.cos_coeffs.iter().chain(&self.sin_coeffs).map(|x| x.abs()).sum()
    }

    fn delta(&self, phi: f64) -> f64 {
        let c: f64 = self
            .cos_coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * ((k + 1) as f64 * phi).cos())
            .sum();
        let s: f64 = self
            .sin_coeffs
            .iter()
            .enumerate()
            .map(|(k, b)| b * ((k + 1) as f64 * phi).sin())
            .sum();
        c + s
    }

    fn delta_prime(&self, phi: f64) -> f64 {
        let c: f64 = self
            .cos_coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| -a * (k + 1) as f64 * ((k + 1) as f64 * phi).sin())
            .sum();
        let s: f64 = self
            .sin_coeffs
            .iter()
            .enumerate()
            .map(|(k, b)| b * (k + 1) as f64 * ((k + 1) as f64 * phi).cos())
            .sum();
        c + s
    }

    pub fn theta(&self, phi: f64, offset: f64) -> f64 {
        self.theta0 + offset + self.delta(phi)
    }

    /// `∫₀^{2π} (1 − cos θ(φ)) dφ` by the periodic trapezoid rule.
    pub fn solid_angle(&self, offset: f64) -> SolidAngle {
        let n = SOLID_ANGLE_NODES;
        let h = 2.0 * PI / n as f64;
        let sum: f64 = (0..n).map(|i| 1.0 - self.theta(i as f64 * h, offset).cos()).sum();
        SolidAngle(sum * h)
    }

    /// Offset `c` for which the deformed loop encloses `target`, by
    /// bisection on `[−amplitude, amplitude]`.
    pub fn renormalizing_offset(&self, target: SolidAngle) -> Result<f64> {
        let a = self.amplitude();
        let f = |c: f64| self.solid_angle(c).value() - target.value();
        if a == 0.0 {
            let mismatch = f(0.0);
            if mismatch.abs() <= 1e-12 * target.value().abs().max(1.0) {
                return Ok(0.0);
            }
            return Err(Error::OutOfRange {
                name: "target solid angle",
                value: target.value(),
                range: "the solid angle of the undeformed cone",
            });
        }
        let (mut lo, mut hi) = (-a, a);
        let (f_lo, f_hi) = (f(lo), f(hi));
        if f_lo > 0.0 || f_hi < 0.0 {
            return Err(Error::OutOfRange {
                name: "target solid angle",
                value: target.value(),
                range: "solid angles reachable with |offset| <= amplitude",
            });
        }
        while hi - lo > OFFSET_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The loop `(θ(2πs), 2πs)` with analytic velocity.
    pub fn path(&self, offset: f64) -> ParameterPath {
        let shape = self.clone();
        let shape_v = self.clone();
        let label = format!("deformed cone at theta0={} offset={offset}", self.theta0);
        let exact = move |s: f64| {
            let phi = 2.0 * PI * s;
            vec![shape.theta(phi, offset), phi]
        };
        ParameterPath::closed_angular(label, &[1], exact)
            .expect("Fourier series is 2π-periodic")
            .with_velocity(move |s| {
                let phi = 2.0 * PI * s;
                vec![2.0 * PI * shape_v.delta_prime(phi), 2.0 * PI]
            })
    }
}

/// Berry phases of the upper Bloch level for a cone and a deformation of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationOutcome {
    pub gamma_circle: f64,
    /// Deformed loop without solid-angle correction.
    pub gamma_raw: f64,
    pub gamma_renormalized: f64,
    pub offset: f64,
    pub solid_angle_circle: f64,
    pub solid_angle_raw: f64,
    pub solid_angle_renormalized: f64,
}

/// Compares the cone with its raw and solid-angle-renormalized deformation
/// using Wilson loops of `steps` steps.
pub fn deformation_phases(deformation: &ConeDeformation, steps: usize) -> Result<DeformationOutcome> {
    let family = BlochFamily::new(1.0);
    let upper = ClusterSelector::level(0.5);
    let target = cone_solid_angle(deformation.theta0)?;
    let offset = deformation.renormalizing_offset(target)?;
    let circle = ParameterPath::azimuthal_loop(deformation.theta0);
    Ok(DeformationOutcome {
        gamma_circle: abelian_phase(&family, &circle, upper, steps)?,
        gamma_raw: abelian_phase(&family, &deformation.path(0.0), upper, steps)?,
        gamma_renormalized: abelian_phase(&family, &deformation.path(offset), upper, steps)?,
        offset,
        solid_angle_circle: target.value(),
        solid_angle_raw: deformation.solid_angle(0.0).value(),
        solid_angle_renormalized: deformation.solid_angle(offset).value(),
    })
}
