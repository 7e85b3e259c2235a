//! Built-in Hamiltonian families and the name-addressed registry.
//!
//! Units: ħ = 1, every frequency is an angular frequency.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::numerics::{c, cr, CMatrix};

use super::ClusterSelector;

/// A map from parameter points to Hermitian matrices of fixed dimension.
pub trait HamiltonianFamily: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn parameter_names(&self) -> &[&'static str];

    fn arity(&self) -> usize {
        self.parameter_names().len()
    }

    /// Raw evaluation. Callers should go through [`super::eval`], which
    /// checks arity and Hermiticity.
    fn hamiltonian(&self, coords: &[f64]) -> CMatrix;

    /// Preferred fixed gauge reference (a `dim × N` matrix) for a cluster, if
    /// the family has a natural one.
    fn gauge_reference(&self, _selector: &ClusterSelector) -> Option<CMatrix> {
        None
    }
}

/// Pauli matrices in the `(|0⟩, |1⟩)` basis with `σ_z|0⟩ = |0⟩`.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

/// `(gap/2)·n̂(θ, φ)·σ`. The upper level is `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn bloch_hamiltonian(gap: f64, theta: f64, phi: f64) -> CMatrix {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (pauli_x() * cr(st * cp) + pauli_y() * cr(st * sp) + pauli_z() * cr(ct)) * cr(0.5 * gap)
}

/// A single qubit in a field of fixed magnitude `gap` along `n̂(θ, φ)`.
///
/// This is also the rotating-frame Hamiltonian of a driven qubit,
/// `((ω₀−ω)/2)σ_z + (ω₁/2)(cos φ σ_x + sin φ σ_y)`, with
/// `gap = √((ω₀−ω)² + ω₁²)` and `θ` the cone angle.
#[derive(Debug, Clone)]
pub struct BlochFamily {
    pub gap: f64,
}

impl BlochFamily {
    pub fn new(gap: f64) -> Self {
        BlochFamily { gap }
    }
}

impl HamiltonianFamily for BlochFamily {
    fn name(&self) -> &str {
        "bloch"
    }

    fn dim(&self) -> usize {
        2
    }

    fn parameter_names(&self) -> &[&'static str] {
        &["theta", "phi"]
    }

    fn hamiltonian(&self, p: &[f64]) -> CMatrix {
        bloch_hamiltonian(self.gap, p[0], p[1])
    }

    /// `|0⟩` for the upper level and `|1⟩` for the lower one, i.e. the
    /// gauge in which the upper state has a real positive `|0⟩` amplitude.
    fn gauge_reference(&self, selector: &ClusterSelector) -> Option<CMatrix> {
        if selector.multiplicity != 1 {
            return None;
        }
        let mut r = CMatrix::zeros(2, 1);
        if selector.target >= 0.0 {
            r[(0, 0)] = cr(1.0);
        } else {
            r[(1, 0)] = cr(1.0);
        }
        Some(r)
    }
}

/// Basis labels of the two-spin system, first label is spin `a`.
pub const TWO_SPIN_BASIS: [&str; 4] = ["up_up", "up_down", "down_up", "down_down"];

/// Two J-coupled spins with spin `a` driven by a rotating field, written in
/// the frame rotating at the drive frequency `ω` about z for spin `a`:
///
/// `H = (ω_a−ω)S_az + ω_b S_bz + 2πJ S_az S_bz + ω₁(cos φ S_ax + sin φ S_ay)`
///
/// Basis order `(↑↑, ↑↓, ↓↑, ↓↓)`. At `ω = ω₁ = 0` this is the undriven
/// Hamiltonian `ω_a S_az + ω_b S_bz + 2πJ S_az S_bz`.
pub fn two_spin_hamiltonian(omega_a: f64, omega_b: f64, j: f64, omega: f64, omega1: f64, phi: f64) -> CMatrix {
    let i2 = CMatrix::identity(2, 2);
    let half = cr(0.5);
    let sz = pauli_z() * half;
    let transverse = (pauli_x() * cr(phi.cos()) + pauli_y() * cr(phi.sin())) * half;
    let sa_z = sz.kronecker(&i2);
    let sb_z = i2.kronecker(&sz);
    let sa_t = transverse.kronecker(&i2);
    &sa_z * cr(omega_a - omega)
        + &sb_z * cr(omega_b)
        + (&sa_z * &sb_z) * cr(2.0 * std::f64::consts::PI * j)
        + sa_t * cr(omega1)
}

/// Parameters `(ω, ω₁, φ)` of the drive on spin `a`.
#[derive(Debug, Clone)]
pub struct TwoSpinFamily {
    pub omega_a: f64,
    pub omega_b: f64,
    pub j: f64,
}

impl TwoSpinFamily {
    pub fn new(omega_a: f64, omega_b: f64, j: f64) -> Self {
        TwoSpinFamily { omega_a, omega_b, j }
    }
}

impl HamiltonianFamily for TwoSpinFamily {
    fn name(&self) -> &str {
        "two_spin"
    }

    fn dim(&self) -> usize {
        4
    }

    fn parameter_names(&self) -> &[&'static str] {
        &["omega", "omega1", "phi"]
    }

    fn hamiltonian(&self, p: &[f64]) -> CMatrix {
        two_spin_hamiltonian(self.omega_a, self.omega_b, self.j, p[0], p[1], p[2])
    }
}

/// `|b⟩(ω₀⟨0| + ω₁⟨1| + ω_a⟨a|) + h.c.` in the basis `(|0⟩, |1⟩, |a⟩, |b⟩)`.
pub fn tripod_coupling_hamiltonian(omega0: f64, omega1: f64, omega_a: f64) -> CMatrix {
    let mut h = CMatrix::zeros(4, 4);
    for (i, w) in [omega0, omega1, omega_a].into_iter().enumerate() {
        h[(3, i)] = cr(w);
        h[(i, 3)] = cr(w);
    }
    h
}

/// The tripod with couplings `ω₀ = B sinθ cosφ`, `ω₁ = B sinθ sinφ`,
/// `ω_a = B cosθ`; parameters `(θ, φ)`.
#[derive(Debug, Clone)]
pub struct TripodFamily {
    pub b: f64,
}

impl TripodFamily {
    pub fn new(b: f64) -> Self {
        TripodFamily { b }
    }
}

impl HamiltonianFamily for TripodFamily {
    fn name(&self) -> &str {
        "tripod"
    }

    fn dim(&self) -> usize {
        4
    }

    fn parameter_names(&self) -> &[&'static str] {
        &["theta", "phi"]
    }

    fn hamiltonian(&self, p: &[f64]) -> CMatrix {
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        tripod_coupling_hamiltonian(self.b * st * cp, self.b * st * sp, self.b * ct)
    }
}

/// Closure-backed family, mostly for tests and ad hoc models.
#[derive(Clone)]
pub struct FnFamily {
    name: String,
    dim: usize,
    parameters: &'static [&'static str],
    f: Arc<dyn Fn(&[f64]) -> CMatrix + Send + Sync>,
}

impl FnFamily {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        parameters: &'static [&'static str],
        f: impl Fn(&[f64]) -> CMatrix + Send + Sync + 'static,
    ) -> Self {
        FnFamily {
            name: name.into(),
            dim,
            parameters,
            f: Arc::new(f),
        }
    }
}

impl HamiltonianFamily for FnFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn parameter_names(&self) -> &[&'static str] {
        self.parameters
    }

    fn hamiltonian(&self, p: &[f64]) -> CMatrix {
        (self.f)(p)
    }
}

/// Schema entry of a registered family.
#[derive(Debug, Clone, Copy)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub dim: usize,
    /// Coordinates of a parameter point, in order.
    pub parameters: &'static [&'static str],
    /// Fixed settings with their defaults.
    pub settings: &'static [(&'static str, f64)],
    pub summary: &'static str,
}

pub const REGISTRY: [FamilyInfo; 3] = [
    FamilyInfo {
        name: "bloch",
        dim: 2,
        parameters: &["theta", "phi"],
        settings: &[("gap", 1.0)],
        summary: "qubit in a field of magnitude `gap` along n(theta, phi)",
    },
    FamilyInfo {
        name: "two_spin",
        dim: 4,
        parameters: &["omega", "omega1", "phi"],
        settings: &[("omega_a", 2.0), ("omega_b", 1.0), ("j", 0.0)],
        summary: "J-coupled spin pair, spin a driven at (omega, omega1, phi), rotating frame",
    },
    FamilyInfo {
        name: "tripod",
        dim: 4,
        parameters: &["theta", "phi"],
        settings: &[("b", 1.0)],
        summary: "tripod coupling |b><v| + h.c. with v = b(sin t cos p, sin t sin p, cos t)",
    },
];

pub fn lookup(name: &str) -> Option<&'static FamilyInfo> {
    REGISTRY.iter().find(|f| f.name == name)
}

/// Builds a registered family. Missing settings take their defaults; an
/// unknown family or setting is reported by name.
pub fn build(name: &str, settings: &BTreeMap<String, f64>) -> Result<Box<dyn HamiltonianFamily>, String> {
    let info = lookup(name).ok_or_else(|| format!("unknown family `{name}`"))?;
    for key in settings.keys() {
        if !info.settings.iter().any(|(k, _)| k == key) {
            return Err(format!("family `{name}` has no setting `{key}`"));
        }
    }
    let get = |key: &str| {
        settings.get(key).copied().unwrap_or_else(|| {
            info.settings
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .unwrap_or_default()
        })
    };
    Ok(match name {
        "bloch" => Box::new(BlochFamily::new(get("gap"))),
        "two_spin" => Box::new(TwoSpinFamily::new(get("omega_a"), get("omega_b"), get("j"))),
        "tripod" => Box::new(TripodFamily::new(get("b"))),
        _ => unreachable!("registry and builder disagree on `{name}`"),
    })
}
