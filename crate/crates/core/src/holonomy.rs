//! Berry phases and non-Abelian holonomies of closed parameter loops.
//!
//! The loop is cut into `M` equal steps in the path parameter. Each step
//! contributes `exp(i A(λ_mid) · λ'(s_mid) Δs)` with the connection taken at
//! the step midpoint, and the factors multiply with the path end leftmost.
//!
//! The connection is evaluated in piecewise fixed-reference gauges: frames
//! are polar-aligned to a constant reference basis until the overlap with it
//! degrades, at which point the current frame becomes the new reference.
//! The gauge is continuous across switches, and the final mismatch between
//! the last gauge and the starting frame enters as a closing transition
//! matrix. The patch layout is planned on a fixed sampling of the path, so
//! it does not depend on `M`.
//!
//! Index convention: `Holonomy::matrix[(l, n)] = ⟨n|ψ_l(T)⟩`, i.e. row `l`
//! holds the final components of the state that started as frame vector
//! `l`. This is the transpose of the column-acting propagator. Under a
//! constant regauging `F → F V` it transforms as `U → Vᵀ U V̄`; its spectrum
//! is gauge invariant.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frames::{
    align, central_difference_connection, overlap_sigma_min, select_frame, ClusterSelector, Frame, HamiltonianFamily,
    ParameterPath, DEFAULT_FD_STEP,
};
use crate::numerics::{eigenvalues_2x2, exp_i_hermitian, identity, polar_unitary, unitarity_defect, CMatrix};

/// Accepted unitarity defect of a holonomy before reprojection.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Reprojection onto the unitary group happens above this defect.
const REPROJECT_TOL: f64 = 1e-10;
/// A new gauge patch starts when the overlap with the current reference has
/// a singular value below this.
pub const PATCH_SWITCH_SIGMA: f64 = 0.25;
const PATCH_SCAN_SAMPLES: usize = 512;

#[derive(Debug, Clone)]
pub struct WilsonOptions {
    pub steps: usize,
    pub fd_step: f64,
    /// Reference basis (`dim × N`) of the first gauge patch. The result is
    /// expressed in the frame at `λ(0)` aligned to it. Falls back to the
    /// family's preferred reference, then to the raw eigenbasis.
    pub gauge_reference: Option<CMatrix>,
}

impl WilsonOptions {
    pub fn new(steps: usize) -> Self {
        WilsonOptions {
            steps,
            fd_step: DEFAULT_FD_STEP,
            gauge_reference: None,
        }
    }

    pub fn with_gauge_reference(mut self, reference: CMatrix) -> Self {
        self.gauge_reference = Some(reference);
        self
    }
}

/// A loop holonomy with its diagnostics.
#[derive(Debug, Clone)]
pub struct Holonomy {
    pub matrix: CMatrix,
    pub steps: usize,
    /// `‖U†U − I‖_max` before any reprojection.
    pub unitarity_defect: f64,
    pub path_label: String,
    /// Number of gauge patches used.
    pub patches: usize,
    /// Frame at `λ(0)` the matrix is expressed in.
    pub base_frame: CMatrix,
}

impl Holonomy {
    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// Rotation angle `γ ∈ [0, π]` of a 2×2 holonomy, read off its
    /// eigenvalues `e^{i(χ ± γ)}`. Gauge invariant.
    pub fn rotation_angle(&self) -> Result<f64> {
        rotation_angle(&self.matrix)
    }
}

/// Half the eigenphase splitting of a 2×2 unitary.
pub fn rotation_angle(u: &CMatrix) -> Result<f64> {
    let [a, b] = eigenvalues_2x2(u)?;
    let split = (a * b.conj()).arg();
    Ok(split.abs() / 2.0)
}

/// Enclosed solid angle in steradians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidAngle(pub f64);

impl SolidAngle {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Solid angle `2π(1 − cos θ)` of the cone with half-opening `θ ∈ [0, π]`.
pub fn cone_solid_angle(theta: f64) -> Result<SolidAngle> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            range: "[0, pi]",
        });
    }
    Ok(SolidAngle(2.0 * PI * (1.0 - theta.cos())))
}

/// Frame at `λ(0)` in which loop holonomies are expressed: aligned to
/// `reference`, else to the family's preferred reference, else raw.
pub fn base_frame(
    family: &dyn HamiltonianFamily,
    path: &ParameterPath,
    selector: ClusterSelector,
    reference: Option<&CMatrix>,
) -> Result<Frame> {
    let fallback = family.gauge_reference(&selector);
    select_frame(family, &path.at(0.0), selector, reference.or(fallback.as_ref()))
}

struct Transport {
    /// Column-acting propagator in the basis of `base_frame`.
    propagator: CMatrix,
    /// `Σ Tr(generator)` accumulated over the steps.
    trace_integral: f64,
    closing: CMatrix,
    patches: usize,
    base_frame: CMatrix,
}

fn transport(
    family: &dyn HamiltonianFamily,
    path: &ParameterPath,
    selector: ClusterSelector,
    opts: &WilsonOptions,
) -> Result<Transport> {
    path.require_closed()?;
    if opts.steps == 0 {
        return Err(Error::OutOfRange {
            name: "steps",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let m = opts.steps;
    let h = opts.fd_step;
    let n = selector.multiplicity;

    let start = base_frame(family, path, selector, opts.gauge_reference.as_ref())?;
    let base = start.vectors.clone();
    let first_ref = opts
        .gauge_reference
        .clone()
        .or_else(|| family.gauge_reference(&selector))
        .unwrap_or_else(|| base.clone());

    let switch_nodes: BTreeSet<usize> = plan_patches(family, path, selector.retarget(start.energy), &first_ref)?
        .into_iter()
        .map(|b| (b * m as f64).round() as usize)
        .filter(|&i| i < m)
        .collect();

    let mut reference = first_ref;
    let mut target = start.energy;
    let mut propagator = identity(n);
    let mut trace_integral = 0.0;
    let ds = 1.0 / m as f64;

    for i in 0..m {
        if switch_nodes.contains(&i) {
            let node = select_frame(
                family,
                &path.at(i as f64 * ds),
                selector.retarget(target),
                Some(&reference),
            )?;
            target = node.energy;
            reference = node.vectors;
        }
        let s_mid = (i as f64 + 0.5) * ds;
        let mid = path.at(s_mid);
        let velocity = path.velocity(s_mid);
        let sel = selector.retarget(target);
        let f0 = select_frame(family, &mid, sel, Some(&reference))?;
        target = f0.energy;

        let mut generator = CMatrix::zeros(n, n);
        for (k, &v) in velocity.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let plus = select_frame(family, &mid.shifted(k, h), sel, Some(&reference))?.vectors;
            let minus = select_frame(family, &mid.shifted(k, -h), sel, Some(&reference))?.vectors;
            let a_k = central_difference_connection(&f0.vectors, &plus, &minus, h);
            generator += a_k * crate::numerics::cr(v * ds);
        }
        trace_integral += generator.trace().re;
        propagator = exp_i_hermitian(&generator, 1.0)? * propagator;
    }

    let end = select_frame(family, &path.at(1.0), selector.retarget(target), Some(&reference))?;
    let closing = base.adjoint() * &end.vectors;
    Ok(Transport {
        propagator: &closing * propagator,
        trace_integral,
        closing,
        patches: switch_nodes.iter().filter(|&&i| i > 0).count() + 1,
        base_frame: base,
    })
}

/// Path-parameter values at which a new gauge patch starts.
fn plan_patches(
    family: &dyn HamiltonianFamily,
    path: &ParameterPath,
    selector: ClusterSelector,
    first_ref: &CMatrix,
) -> Result<Vec<f64>> {
    let mut reference = first_ref.clone();
    let mut target = selector.target;
    let mut bounds: Vec<f64> = Vec::new();
    let start = select_frame(family, &path.at(0.0), selector, None)?;
    let mut prev = (0.0, align(&start.vectors, &reference).ok());

    for j in 1..=PATCH_SCAN_SAMPLES {
        let s = j as f64 / PATCH_SCAN_SAMPLES as f64;
        let raw = select_frame(family, &path.at(s), selector.retarget(target), None)?;
        target = raw.energy;
        if overlap_sigma_min(&raw.vectors, &reference) < PATCH_SWITCH_SIGMA {
            let (s_prev, ref f_prev) = prev;
            let progressed = bounds.last().is_none_or(|&b| s_prev > b);
            if let (true, Some(f_prev)) = (progressed, f_prev) {
                bounds.push(s_prev);
                reference = f_prev.clone();
            }
        }
        let aligned = align(&raw.vectors, &reference)?;
        prev = (s, Some(aligned));
    }
    Ok(bounds)
}

fn finish(t: Transport, steps: usize, label: &str) -> Result<Holonomy> {
    let defect = unitarity_defect(&t.propagator);
    if !(defect <= UNITARITY_TOL) {
        return Err(Error::UnitarityLoss(defect));
    }
    let w = if defect > REPROJECT_TOL {
        polar_unitary(&t.propagator).0
    } else {
        t.propagator
    };
    Ok(Holonomy {
        matrix: w.transpose(),
        steps,
        unitarity_defect: defect,
        path_label: label.to_string(),
        patches: t.patches,
        base_frame: t.base_frame,
    })
}

/// Path-ordered exponential of the connection around a closed loop.
pub fn wilson_loop(
    family: &dyn HamiltonianFamily,
    path: &ParameterPath,
    selector: ClusterSelector,
    opts: &WilsonOptions,
) -> Result<Holonomy> {
    let t = transport(family, path, selector, opts)?;
    finish(t, opts.steps, path.label())
}

/// Berry phase `γ` (phase factor `e^{iγ}`) of a non-degenerate level.
///
/// Returned unreduced: the accumulated connection integral plus the
/// principal phase of the closing transition, which vanishes when the whole
/// loop fits in one gauge patch.
pub fn abelian_phase(
    family: &dyn HamiltonianFamily,
    path: &ParameterPath,
    selector: ClusterSelector,
    steps: usize,
) -> Result<f64> {
    abelian_phase_with(family, path, selector, &WilsonOptions::new(steps))
}

pub fn abelian_phase_with(
    family: &dyn HamiltonianFamily,
    path: &ParameterPath,
    selector: ClusterSelector,
    opts: &WilsonOptions,
) -> Result<f64> {
    if selector.multiplicity != 1 {
        return Err(Error::DegeneracyMismatch {
            target: selector.target,
            expected: 1,
            found: selector.multiplicity,
        });
    }
    let t = transport(family, path, selector, opts)?;
    Ok(t.trace_integral + t.closing[(0, 0)].arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{BlochFamily, ParameterPoint, TripodFamily};
    use crate::numerics::{cr, max_abs};

    #[test]
    fn solid_angle_examples() {
        assert_eq!(cone_solid_angle(0.0).unwrap().value(), 0.0);
        assert!((cone_solid_angle(PI / 2.0).unwrap().value() - 2.0 * PI).abs() < 1e-15);
        assert!((cone_solid_angle(PI).unwrap().value() - 4.0 * PI).abs() < 1e-15);
        assert!(cone_solid_angle(-0.1).is_err());
        assert!(cone_solid_angle(3.2).is_err());
    }

    #[test]
    fn bloch_equator_phase() {
        let fam = BlochFamily::new(1.0);
        let g = abelian_phase(
            &fam,
            &ParameterPath::azimuthal_loop(PI / 2.0),
            ClusterSelector::level(0.5),
            2000,
        )
        .unwrap();
        assert!((g + PI).abs() < 1e-6, "{g}");
    }

    #[test]
    fn pole_loop_has_no_phase() {
        let fam = BlochFamily::new(1.0);
        let g = abelian_phase(
            &fam,
            &ParameterPath::azimuthal_loop(0.0),
            ClusterSelector::level(0.5),
            100,
        )
        .unwrap();
        assert!(g.abs() < 1e-12);
    }

    #[test]
    fn lower_level_has_opposite_phase() {
        let fam = BlochFamily::new(1.0);
        let path = ParameterPath::azimuthal_loop(PI / 3.0);
        let g = abelian_phase(&fam, &path, ClusterSelector::level(-0.5), 1000).unwrap();
        assert!((g - PI / 2.0).abs() < 1e-6, "{g}");
    }

    #[test]
    fn constant_path_gives_identity() {
        let fam = TripodFamily::new(1.0);
        let path = ParameterPath::constant(ParameterPoint::from([0.4, 0.3]));
        let hol = wilson_loop(&fam, &path, ClusterSelector::new(0.0, 2), &WilsonOptions::new(50)).unwrap();
        assert!(max_abs(&(hol.matrix - identity(2))) < 1e-14);
    }

    #[test]
    fn abelian_wilson_matches_phase() {
        let fam = BlochFamily::new(1.0);
        let path = ParameterPath::azimuthal_loop(PI / 2.0);
        let sel = ClusterSelector::level(0.5);
        let hol = wilson_loop(&fam, &path, sel, &WilsonOptions::new(2000)).unwrap();
        assert!((hol.matrix[(0, 0)] - cr(-1.0)).norm() < 1e-6);
        let g = abelian_phase(&fam, &path, sel, 2000).unwrap();
        assert!((hol.matrix[(0, 0)] - num_complex::Complex64::from_polar(1.0, g)).norm() < 1e-9);
    }

    #[test]
    fn open_path_is_rejected() {
        let fam = BlochFamily::new(1.0);
        let path = ParameterPath::open("arc", |s| vec![1.0, s]);
        assert!(matches!(
            abelian_phase(&fam, &path, ClusterSelector::level(0.5), 10),
            Err(Error::OpenPath { .. })
        ));
    }
}
