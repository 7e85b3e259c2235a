//! Dense complex linear algebra for the small (dimension ≤ 8) operators used
//! throughout the crate.
//!
//! Everything here is a pure function of its inputs. Hermitian
//! eigendecomposition and SVD are delegated to `nalgebra`; this module adds
//! the input validation, eigenvalue ordering and the unitary-specific helpers
//! (spectral exponential, polar factor, phase-insensitive distance).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance on the Hermitian / anti-Hermitian structure of inputs, relative
/// to `max(1, ‖M‖_max)`.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖M − M†‖_max`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `(M + M†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * cr(0.5)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    let (r, c) = m.shape();
    if r == 0 || r != c {
        return Err(Error::DimensionMismatch {
            expected: "non-empty square matrix".into(),
            got: format!("{r}x{c}"),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

fn structure_tol(m: &CMatrix) -> f64 {
    STRUCTURE_TOL * max_abs(m).max(1.0)
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored column-wise.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// The input is symmetrized before diagonalization; asymmetry above
/// `1e-12 · max(1, ‖H‖_max)` is rejected. Degenerate eigenvectors come back in
/// whatever basis the solver produced, gauge fixing belongs to [`crate::frames`].
pub fn eigh(h: &CMatrix) -> Result<EigenDecomposition> {
    let n = check_square(h)?;
    let asym = hermiticity_defect(h);
    if asym > structure_tol(h) {
        return Err(Error::NonHermitianInput(asym));
    }
    let eig = hermitize(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `exp(i·scale·H)` for Hermitian `H`, by spectral decomposition.
pub fn exp_i_hermitian(h: &CMatrix, scale: f64) -> Result<CMatrix> {
    let eig = eigh(h)?;
    Ok(spectral_phase(&eig, scale))
}

/// `V · diag(exp(i·scale·λ_k)) · V†` from an existing decomposition.
pub fn spectral_phase(eig: &EigenDecomposition, scale: f64) -> CMatrix {
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, scale * lambda);
        for z in scaled.column_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    scaled * v.adjoint()
}

/// Exponential of an anti-Hermitian matrix, computed as `exp(-i·(iA))` with
/// `iA` Hermitian. The result is unitary to roundoff.
pub fn unitary_exp(a: &CMatrix) -> Result<CMatrix> {
    check_square(a)?;
    let defect = max_abs(&(a + a.adjoint()));
    if defect > structure_tol(a) {
        return Err(Error::NonAntiHermitianInput(defect));
    }
    let h = hermitize(&(a * Complex64::i()));
    exp_i_hermitian(&h, -1.0)
}

/// Unitary polar factor `W = U V†` of `M = U Σ V†`, together with the
/// smallest singular value of `M`.
pub fn polar_unitary(m: &CMatrix) -> (CMatrix, f64) {
    let svd = m.clone().svd(true, true);
    let sigma_min = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    let u = svd.u.expect("svd requested U");
    let v_t = svd.v_t.expect("svd requested V^T");
    (u * v_t, sigma_min)
}

/// How [`unitary_distance`] treats a global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    Exact,
    UpToGlobalPhase,
}

/// Entrywise max-norm distance between two operators, optionally minimized
/// over a global phase: `min_φ ‖U − e^{iφ} V‖_max`.
///
/// The phase of `Tr(V†U)` minimizes the Frobenius norm but not the max norm,
/// and using it directly breaks the triangle inequality. The exact minimum
/// is found instead. Each entry contributes `|u − e^{iφ} v|`, a function of `φ`
/// with a single minimum, so the minimum of their maximum lies at one
/// entry's own minimum or where two entries cross; all such candidates (and
/// the trace phase) are evaluated.
pub fn unitary_distance(u: &CMatrix, v: &CMatrix, mode: PhaseMode) -> Result<f64> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("{:?}", u.shape()),
            got: format!("{:?}", v.shape()),
        });
    }
    match mode {
        PhaseMode::Exact => Ok(max_abs(&(u - v))),
        PhaseMode::UpToGlobalPhase => Ok(min_over_global_phase(u, v)),
    }
}

fn min_over_global_phase(u: &CMatrix, v: &CMatrix) -> f64 {
    // |u − e^{iφ}v|² = r − 2p·cos(φ − δ) with r = |u|² + |v|², p = |u||v|,
    // δ = arg(u v̄). Terms with the largest peak go first so that
    // evaluations can stop early.
    let mut terms: Vec<(f64, f64, f64)> = u
        .iter()
        .zip(v.iter())
        .map(|(a, b)| {
            let w = a * b.conj();
            (
                a.norm_sqr() + b.norm_sqr(),
                w.norm(),
                if w.norm() > 0.0 { w.arg() } else { 0.0 },
            )
        })
        .collect();
    terms.sort_by(|x, y| (y.0 + 2.0 * y.1).total_cmp(&(x.0 + 2.0 * x.1)));
    let term = |&(r, p, d): &(f64, f64, f64), phi: f64| r - 2.0 * p * (phi - d).cos();
    // Squared cost, abandoned once it cannot beat `bound`.
    let cost_sq = |phi: f64, bound: f64| {
        let mut worst = f64::NEG_INFINITY;
        for t in &terms {
            worst = worst.max(term(t, phi));
            if worst >= bound {
                break;
            }
        }
        worst
    };
    // Every term's own minimum bounds the answer from below.
    let floor = terms.iter().map(|&(r, p, _)| r - 2.0 * p).fold(0.0, f64::max);

    let (mut best, mut best_phi) = (f64::INFINITY, 0.0);
    let consider = |phi: f64, best: &mut f64, best_phi: &mut f64| {
        let c = cost_sq(phi, *best);
        if c < *best {
            *best = c;
            *best_phi = phi;
        }
    };
    consider((v.adjoint() * u).trace().arg(), &mut best, &mut best_phi);
    for (i, t1) in terms.iter().enumerate() {
        let (r1, p1, d1) = *t1;
        if p1 > 0.0 && r1 - 2.0 * p1 < best {
            consider(d1, &mut best, &mut best_phi);
        }
        for &(r2, p2, d2) in &terms[i + 1..] {
            // 2p₁cos(φ−δ₁) − 2p₂cos(φ−δ₂) = r₁ − r₂  ⇔  A cos φ + B sin φ = r₁ − r₂
            let a = 2.0 * (p1 * d1.cos() - p2 * d2.cos());
            let b = 2.0 * (p1 * d1.sin() - p2 * d2.sin());
            let rho = a.hypot(b);
            if rho == 0.0 {
                continue;
            }
            let ratio = (r1 - r2) / rho;
            if ratio.abs() > 1.0 {
                continue;
            }
            let base = b.atan2(a);
            let off = ratio.acos();
            for phi in [base + off, base - off] {
                let level = term(t1, phi);
                if level < best && level >= floor - 1e-12 {
                    consider(phi, &mut best, &mut best_phi);
                }
            }
        }
    }

    // Crossing angles lose precision when two terms meet almost tangentially,
    // and the squared cost cancels near zero. Polish the winner on the direct
    // entrywise difference.
    let direct = |phi: f64| max_abs(&(u - v * Complex64::from_polar(1.0, phi)));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_phi - 1e-6, best_phi + 1e-6);
    for _ in 0..48 {
        let x1 = hi - inv_phi * (hi - lo);
        let x2 = lo + inv_phi * (hi - lo);
        if direct(x1) < direct(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    direct(best_phi).min(direct(0.5 * (lo + hi)))
}

/// Eigenvalues of a general complex 2×2 matrix (closed-form quadratic).
pub fn eigenvalues_2x2(m: &CMatrix) -> Result<[Complex64; 2]> {
    if m.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            expected: "2x2".into(),
            got: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    let half_tr = (m[(0, 0)] + m[(1, 1)]) * 0.5;
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (half_tr * half_tr - det).sqrt();
    Ok([half_tr + disc, half_tr - disc])
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn diag(values: &[Complex64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_column_slice(values))
    }

    #[test]
    fn identity_spectrum() {
        let eig = eigh(&identity(2)).unwrap();
        assert_eq!(eig.eigenvalues.len(), 2);
        for &e in &eig.eigenvalues {
            assert!((e - 1.0).abs() < 1e-14);
        }
        assert!(unitarity_defect(&eig.eigenvectors) < 1e-12);
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let eig = eigh(&diag(&[cr(3.0), cr(-1.0)])).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 3.0]);
        assert!((eig.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((eig.eigenvectors[(0, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tripod_spectrum() {
        let mut h = CMatrix::zeros(4, 4);
        for i in 0..3 {
            h[(3, i)] = cr(1.0);
            h[(i, 3)] = cr(1.0);
        }
        let eig = eigh(&h).unwrap();
        let expected = [-(3f64.sqrt()), 0.0, 0.0, 3f64.sqrt()];
        for (e, x) in eig.eigenvalues.iter().zip(expected) {
            assert!((e - x).abs() < 1e-12, "{e} vs {x}");
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut h = identity(2);
        h[(0, 1)] = cr(1.0);
        assert!(matches!(eigh(&h), Err(Error::NonHermitianInput(_))));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(eigh(&rect), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = unitary_exp(&CMatrix::zeros(3, 3)).unwrap();
        assert!(max_abs(&(u - identity(3))) < 1e-15);
    }

    #[test]
    fn exp_of_diagonal_phases() {
        let a = diag(&[c(0.0, PI), c(0.0, -PI)]);
        let u = unitary_exp(&a).unwrap();
        assert!(max_abs(&(u - diag(&[cr(-1.0), cr(-1.0)]))) < 1e-14);
    }

    #[test]
    fn exp_of_real_antisymmetric_is_rotation() {
        let gamma: f64 = 0.3;
        let a = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(-gamma), cr(gamma), cr(0.0)]);
        let u = unitary_exp(&a).unwrap();
        let r = CMatrix::from_row_slice(
            2,
            2,
            &[cr(gamma.cos()), cr(-gamma.sin()), cr(gamma.sin()), cr(gamma.cos())],
        );
        assert!(max_abs(&(u - r)) < 1e-14);
    }

    #[test]
    fn exp_rejects_hermitian_input() {
        assert!(matches!(
            unitary_exp(&identity(2)),
            Err(Error::NonAntiHermitianInput(_))
        ));
    }

    #[test]
    fn distance_examples() {
        let u = CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.8), c(0.6, 0.0)]);
        assert_eq!(unitary_distance(&u, &u, PhaseMode::Exact).unwrap(), 0.0);
        let shifted = &u * Complex64::from_polar(1.0, PI / 3.0);
        assert!(unitary_distance(&u, &shifted, PhaseMode::UpToGlobalPhase).unwrap() < 1e-12);
        let z = diag(&[cr(1.0), cr(-1.0)]);
        assert_eq!(unitary_distance(&identity(2), &z, PhaseMode::Exact).unwrap(), 2.0);
        assert!(unitary_distance(&identity(2), &identity(3), PhaseMode::Exact).is_err());
    }

    #[test]
    fn polar_factor_of_unitary_is_itself() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.2), c(0.4, 0.1), c(-0.4, 0.1), c(0.0, -0.7)]);
        let u = unitary_exp(&a).unwrap();
        let (w, smin) = polar_unitary(&(&u * cr(2.0)));
        assert!(max_abs(&(w - u)) < 1e-13);
        assert!((smin - 2.0).abs() < 1e-13);
    }

    #[test]
    fn closed_form_2x2_eigenvalues() {
        let gamma: f64 = 0.7;
        let r = CMatrix::from_row_slice(
            2,
            2,
            &[cr(gamma.cos()), cr(-gamma.sin()), cr(gamma.sin()), cr(gamma.cos())],
        );
        let [a, b] = eigenvalues_2x2(&r).unwrap();
        let mut args = [a.arg(), b.arg()];
        args.sort_by(f64::total_cmp);
        assert!((args[0] + gamma).abs() < 1e-12 && (args[1] - gamma).abs() < 1e-12);
    }

    #[test]
    fn wrap_phase_range() {
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-0.5) + 0.5).abs() < 1e-15);
        assert!((wrap_phase(2.0 * PI)).abs() < 1e-15);
    }
}
