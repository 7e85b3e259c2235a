//! Eigen-subspace frames along parameter paths and the gauge connection
//! `A_k = i F† ∂_k F` they induce.
//!
//! A *frame* is an orthonormal basis (stored column-wise) of one eigenvalue
//! cluster of `H(λ)`. Raw eigensolver output carries an arbitrary unitary
//! gauge per point; the functions here fix it by polar alignment against a
//! reference basis, which is the closest-to-reference choice in Frobenius
//! norm and varies smoothly with `λ` while the overlap stays full rank.

mod families;
mod path;

pub use families::{
    bloch_hamiltonian, build as build_family, lookup as lookup_family, pauli_x, pauli_y, pauli_z,
    tripod_coupling_hamiltonian, two_spin_hamiltonian, BlochFamily, FamilyInfo, FnFamily, HamiltonianFamily,
    TripodFamily, TwoSpinFamily, REGISTRY as FAMILY_REGISTRY, TWO_SPIN_BASIS,
};
pub use path::{ParameterPath, ParameterPoint, CLOSURE_TOL};

use crate::error::{Error, Result};
use crate::numerics::{c, cr, eigh, hermiticity_defect, hermitize, max_abs, polar_unitary, CMatrix, CVector};

/// Consecutive eigenvalues closer than this (relative to `max(1, ‖H‖_max)`)
/// belong to one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Minimum separation of the selected cluster from the rest of the spectrum,
/// relative to `max(1, ‖H‖_max)`.
pub const GAP_TOL: f64 = 1e-6;
/// Alignment refuses overlaps whose smallest singular value is below this.
pub const OVERLAP_TOL: f64 = 1e-6;
/// Default central-difference step for the connection.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Addresses an eigenvalue cluster by approximate value and expected size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSelector {
    pub target: f64,
    pub multiplicity: usize,
}

impl ClusterSelector {
    pub fn new(target: f64, multiplicity: usize) -> Self {
        ClusterSelector { target, multiplicity }
    }

    /// A single non-degenerate level near `target`.
    pub fn level(target: f64) -> Self {
        ClusterSelector::new(target, 1)
    }

    pub fn retarget(self, target: f64) -> Self {
        ClusterSelector { target, ..self }
    }
}

/// Orthonormal basis of one eigenvalue cluster at a parameter point.
#[derive(Debug, Clone)]
pub struct Frame {
    pub point: ParameterPoint,
    /// `dim × N`, columns orthonormal.
    pub vectors: CMatrix,
    /// Mean eigenvalue of the cluster.
    pub energy: f64,
    pub selector: ClusterSelector,
}

impl Frame {
    pub fn rank(&self) -> usize {
        self.vectors.ncols()
    }
}

/// Evaluates a family at a point, checking arity and Hermiticity.
pub fn eval(family: &dyn HamiltonianFamily, point: &ParameterPoint) -> Result<CMatrix> {
    if point.len() != family.arity() {
        return Err(Error::ArityMismatch {
            family: family.name().to_string(),
            expected: family.arity(),
            got: point.len(),
        });
    }
    let h = family.hamiltonian(point.coords());
    let asym = hermiticity_defect(&h);
    if !(asym <= 1e-12 * max_abs(&h).max(1.0)) {
        return Err(Error::NonHermitianEvaluation {
            family: family.name().to_string(),
            asymmetry: asym,
        });
    }
    Ok(h)
}

/// Rotates `raw` within its span so that `raw† · reference` becomes
/// Hermitian positive definite (polar alignment).
pub fn align(raw: &CMatrix, reference: &CMatrix) -> Result<CMatrix> {
    if raw.shape() != reference.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("{:?}", raw.shape()),
            got: format!("{:?}", reference.shape()),
        });
    }
    let overlap = raw.adjoint() * reference;
    let (w, sigma_min) = polar_unitary(&overlap);
    if !(sigma_min >= OVERLAP_TOL) {
        return Err(Error::GaugeDiscontinuity(sigma_min));
    }
    Ok(raw * w)
}

/// Smallest singular value of `a† b`.
pub fn overlap_sigma_min(a: &CMatrix, b: &CMatrix) -> f64 {
    polar_unitary(&(a.adjoint() * b)).1
}

/// Selects the eigenvalue cluster nearest `selector.target` and returns an
/// orthonormal basis for it, gauge-aligned to `reference` when given.
pub fn select_frame(
    family: &dyn HamiltonianFamily,
    point: &ParameterPoint,
    selector: ClusterSelector,
    reference: Option<&CMatrix>,
) -> Result<Frame> {
    let h = eval(family, point)?;
    let scale = max_abs(&h).max(1.0);
    let eig = eigh(&h)?;
    let values = &eig.eigenvalues;

    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > CLUSTER_TOL * scale {
            clusters.push((start, i));
            start = i;
        }
    }
    let mean = |&(a, b): &(usize, usize)| values[a..b].iter().sum::<f64>() / (b - a) as f64;
    let (idx, &(lo, hi)) = clusters
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| {
            (mean(x) - selector.target)
                .abs()
                .total_cmp(&(mean(y) - selector.target).abs())
        })
        .expect("spectrum is non-empty");
    if hi - lo != selector.multiplicity {
        return Err(Error::DegeneracyMismatch {
            target: selector.target,
            expected: selector.multiplicity,
            found: hi - lo,
        });
    }
    let mut gap = f64::INFINITY;
    if idx > 0 {
        gap = gap.min(values[lo] - values[lo - 1]);
    }
    if hi < values.len() {
        gap = gap.min(values[hi] - values[hi - 1]);
    }
    if gap < GAP_TOL * scale {
        return Err(Error::GapCollapse {
            gap,
            threshold: GAP_TOL * scale,
        });
    }

    let raw = eig.eigenvectors.columns(lo, hi - lo).into_owned();
    let vectors = match reference {
        Some(r) => align(&raw, r)?,
        None => raw,
    };
    Ok(Frame {
        point: point.clone(),
        vectors,
        energy: mean(&(lo, hi)),
        selector,
    })
}

/// Anything that can hand out a frame (in a fixed gauge) at a point.
pub trait FrameProvider {
    fn frame(&self, point: &ParameterPoint) -> Result<CMatrix>;

    /// Analytic `∂F/∂λ_k`, when known.
    fn frame_derivative(&self, _point: &ParameterPoint, _k: usize) -> Option<Result<CMatrix>> {
        None
    }
}

/// Numerical frames of a family, each aligned to one fixed reference basis.
///
/// This is a single-valued smooth gauge on the region where the overlap with
/// the reference stays full rank.
pub struct ReferenceGauge<'a> {
    pub family: &'a dyn HamiltonianFamily,
    pub selector: ClusterSelector,
    pub reference: CMatrix,
}

impl<'a> ReferenceGauge<'a> {
    pub fn new(family: &'a dyn HamiltonianFamily, selector: ClusterSelector, reference: CMatrix) -> Self {
        ReferenceGauge {
            family,
            selector,
            reference,
        }
    }
}

impl FrameProvider for ReferenceGauge<'_> {
    fn frame(&self, point: &ParameterPoint) -> Result<CMatrix> {
        Ok(select_frame(self.family, point, self.selector, Some(&self.reference))?.vectors)
    }
}

type FrameFn = Box<dyn Fn(&[f64]) -> CMatrix + Send + Sync>;
type FrameDerivFn = Box<dyn Fn(&[f64], usize) -> CMatrix + Send + Sync>;

/// Closed-form frames, optionally with closed-form derivatives.
pub struct AnalyticFrames {
    frame: FrameFn,
    derivative: Option<FrameDerivFn>,
}

impl AnalyticFrames {
    pub fn new(frame: impl Fn(&[f64]) -> CMatrix + Send + Sync + 'static) -> Self {
        AnalyticFrames {
            frame: Box::new(frame),
            derivative: None,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(&[f64], usize) -> CMatrix + Send + Sync + 'static) -> Self {
        self.derivative = Some(Box::new(d));
        self
    }
}

impl FrameProvider for AnalyticFrames {
    fn frame(&self, point: &ParameterPoint) -> Result<CMatrix> {
        Ok((self.frame)(point.coords()))
    }

    fn frame_derivative(&self, point: &ParameterPoint, k: usize) -> Option<Result<CMatrix>> {
        self.derivative.as_ref().map(|d| Ok(d(point.coords(), k)))
    }
}

/// `A_k(λ) = i F† ∂_k F`, Hermitized.
///
/// Uses the provider's analytic derivative when it has one, otherwise a
/// central difference with step `h` (error `O(h²)`).
pub fn connection_at(provider: &dyn FrameProvider, point: &ParameterPoint, k: usize, h: f64) -> Result<CMatrix> {
    if k >= point.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("coordinate index < {}", point.len()),
            got: k.to_string(),
        });
    }
    let f0 = provider.frame(point)?;
    match provider.frame_derivative(point, k) {
        Some(d) => Ok(hermitize(&(f0.adjoint() * d? * c(0.0, 1.0)))),
        None => {
            let plus = provider.frame(&point.shifted(k, h))?;
            let minus = provider.frame(&point.shifted(k, -h))?;
            Ok(central_difference_connection(&f0, &plus, &minus, h))
        }
    }
}

/// `i F₀† (F₊ − F₋) / 2h`, Hermitized. All three frames must share a gauge.
pub(crate) fn central_difference_connection(f0: &CMatrix, plus: &CMatrix, minus: &CMatrix, h: f64) -> CMatrix {
    hermitize(&(f0.adjoint() * (plus - minus) * c(0.0, 0.5 / h)))
}

/// Connection matrices for every coordinate at one point.
#[derive(Debug, Clone)]
pub struct ConnectionSample {
    pub point: ParameterPoint,
    pub components: Vec<CMatrix>,
}

pub fn connection_sample(provider: &dyn FrameProvider, point: &ParameterPoint, h: f64) -> Result<ConnectionSample> {
    let components = (0..point.len())
        .map(|k| connection_at(provider, point, k, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConnectionSample {
        point: point.clone(),
        components,
    })
}

/// Upper Bloch state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn bloch_state(theta: f64, phi: f64) -> CVector {
    CVector::from_vec(vec![
        cr((theta / 2.0).cos()),
        num_complex::Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{identity, unitarity_defect};
    use std::f64::consts::PI;

    fn bloch() -> BlochFamily {
        BlochFamily::new(1.0)
    }

    #[test]
    fn eval_checks_arity() {
        let err = eval(&bloch(), &ParameterPoint::from([0.1])).unwrap_err();
        assert!(matches!(
            err,
            Error::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            }
        ));
    }

    #[test]
    fn eval_rejects_non_hermitian_family() {
        let fam = FnFamily::new("skew", 2, &["x"], |p| {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 1)] = cr(p[0]);
            m
        });
        assert!(matches!(
            eval(&fam, &ParameterPoint::from([1.0])),
            Err(Error::NonHermitianEvaluation { .. })
        ));
    }

    #[test]
    fn bloch_pole_upper_frame_is_ket_zero() {
        let f = select_frame(
            &bloch(),
            &ParameterPoint::from([0.0, 1.3]),
            ClusterSelector::level(0.5),
            None,
        )
        .unwrap();
        assert!((f.vectors[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(f.vectors[(1, 0)].norm() < 1e-14);
        assert!((f.energy - 0.5).abs() < 1e-14);
    }

    #[test]
    fn tripod_dark_frame_spans_zero_cluster() {
        let fam = TripodFamily::new(1.0);
        let (theta, phi) = (0.7, 1.1);
        let f = select_frame(
            &fam,
            &ParameterPoint::from([theta, phi]),
            ClusterSelector::new(0.0, 2),
            None,
        )
        .unwrap();
        assert_eq!(f.rank(), 2);
        let chi1 = [phi.sin(), -phi.cos(), 0.0, 0.0];
        let chi2 = [theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin(), 0.0];
        for chi in [chi1, chi2] {
            let v = CVector::from_iterator(4, chi.into_iter().map(cr));
            let proj = f.vectors.adjoint() * &v;
            assert!((proj.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_multiplicity_is_reported() {
        let fam = TripodFamily::new(1.0);
        let err = select_frame(
            &fam,
            &ParameterPoint::from([0.3, 0.2]),
            ClusterSelector::new(0.0, 1),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegeneracyMismatch { found: 2, .. }));
    }

    #[test]
    fn gap_collapse_is_reported() {
        let fam = FnFamily::new("near", 2, &["e"], |p| {
            CMatrix::from_diagonal(&CVector::from_vec(vec![cr(0.0), cr(p[0])]))
        });
        let err = select_frame(&fam, &ParameterPoint::from([1e-7]), ClusterSelector::level(0.0), None).unwrap_err();
        assert!(matches!(err, Error::GapCollapse { .. }));
    }

    #[test]
    fn alignment_fixed_point() {
        let fam = TripodFamily::new(1.3);
        let p = ParameterPoint::from([0.4, 2.0]);
        let sel = ClusterSelector::new(0.0, 2);
        let first = select_frame(&fam, &p, sel, None).unwrap();
        let again = select_frame(&fam, &p, sel, Some(&first.vectors)).unwrap();
        assert!(max_abs(&(again.vectors - first.vectors)) < 1e-10);
    }

    #[test]
    fn alignment_refuses_orthogonal_reference() {
        let mut up = CMatrix::zeros(2, 1);
        up[(0, 0)] = cr(1.0);
        let mut down = CMatrix::zeros(2, 1);
        down[(1, 0)] = cr(1.0);
        assert!(matches!(align(&up, &down), Err(Error::GaugeDiscontinuity(_))));
    }

    #[test]
    fn bloch_connection_closed_forms() {
        let fam = bloch();
        let sel = ClusterSelector::level(0.5);
        let gauge = ReferenceGauge::new(&fam, sel, fam.gauge_reference(&sel).unwrap());
        for &(theta, phi) in &[(PI / 2.0, 0.3), (0.4, 2.0), (2.0, -1.0)] {
            let p = ParameterPoint::from([theta, phi]);
            let a_theta = connection_at(&gauge, &p, 0, DEFAULT_FD_STEP).unwrap();
            let a_phi = connection_at(&gauge, &p, 1, DEFAULT_FD_STEP).unwrap();
            assert!(a_theta[(0, 0)].norm() < 1e-8);
            assert!((a_phi[(0, 0)].re + (1.0 - theta.cos()) / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        let exact = AnalyticFrames::new(|p| {
            let v = bloch_state(p[0], p[1]);
            CMatrix::from_column_slice(2, 1, v.as_slice())
        })
        .with_derivative(|p, k| {
            let (t, ph) = (p[0], p[1]);
            let d = if k == 0 {
                vec![
                    cr(-(t / 2.0).sin() / 2.0),
                    num_complex::Complex64::from_polar((t / 2.0).cos() / 2.0, ph),
                ]
            } else {
                vec![
                    cr(0.0),
                    num_complex::Complex64::from_polar((t / 2.0).sin(), ph) * c(0.0, 1.0),
                ]
            };
            CMatrix::from_column_slice(2, 1, &d)
        });
        let fd = AnalyticFrames::new(|p| {
            let v = bloch_state(p[0], p[1]);
            CMatrix::from_column_slice(2, 1, v.as_slice())
        });
        let p = ParameterPoint::from([1.1, 0.4]);
        for k in 0..2 {
            let a = connection_at(&exact, &p, k, DEFAULT_FD_STEP).unwrap();
            let b = connection_at(&fd, &p, k, DEFAULT_FD_STEP).unwrap();
            assert!(max_abs(&(a - b)) < 1e-9);
        }
    }

    #[test]
    fn frames_are_orthonormal_eigenvectors() {
        let fam = TwoSpinFamily::new(3.0, 1.0, 0.3);
        let p = ParameterPoint::from([3.0, 0.8, 0.5]);
        let h = eval(&fam, &p).unwrap();
        let eig = eigh(&h).unwrap();
        for &e in &eig.eigenvalues {
            let f = select_frame(&fam, &p, ClusterSelector::level(e), None).unwrap();
            assert!(unitarity_defect(&f.vectors) < 1e-11);
            let resid = &h * &f.vectors - &f.vectors * cr(f.energy);
            assert!(max_abs(&resid) < 1e-9 * max_abs(&h).max(1.0));
        }
        let full = select_frame(
            &FnFamily::new("id", 3, &[], |_| identity(3)),
            &ParameterPoint::from(Vec::new()),
            ClusterSelector::new(1.0, 3),
            None,
        )
        .unwrap();
        assert_eq!(full.rank(), 3);
    }
}
