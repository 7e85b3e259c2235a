use std::f64::consts::PI;
use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Endpoint tolerance for closed paths, per coordinate.
pub const CLOSURE_TOL: f64 = 1e-10;

/// A point in control-parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPoint(Vec<f64>);

impl ParameterPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        ParameterPoint(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Copy of the point displaced by `delta` along coordinate `k`.
    pub fn shifted(&self, k: usize, delta: f64) -> Self {
        let mut coords = self.0.clone();
        coords[k] += delta;
        ParameterPoint(coords)
    }
}

impl From<Vec<f64>> for ParameterPoint {
    fn from(v: Vec<f64>) -> Self {
        ParameterPoint(v)
    }
}

impl<const N: usize> From<[f64; N]> for ParameterPoint {
    fn from(v: [f64; N]) -> Self {
        ParameterPoint(v.to_vec())
    }
}

impl Index<usize> for ParameterPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

type PointFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A piecewise-smooth curve `λ(s)`, `s ∈ [0, 1]`.
///
/// The velocity `dλ/ds` is analytic when supplied, otherwise a central
/// difference of the evaluator (one-sided at the ends).
#[derive(Clone)]
pub struct ParameterPath {
    point: PointFn,
    velocity: Option<PointFn>,
    closed: bool,
    label: String,
}

impl fmt::Debug for ParameterPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParameterPath")
            .field("label", &self.label)
            .field("closed", &self.closed)
            .field("analytic_velocity", &self.velocity.is_some())
            .finish()
    }
}

const VELOCITY_FD_STEP: f64 = 1e-6;

impl ParameterPath {
    /// An open path.
    pub fn open(label: impl Into<String>, point: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        ParameterPath {
            point: Arc::new(point),
            velocity: None,
            closed: false,
            label: label.into(),
        }
    }

    /// A closed loop; fails with [`Error::OpenPath`] if the endpoints differ.
    pub fn closed(label: impl Into<String>, point: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Result<Self> {
        let label = label.into();
        let (start, end) = (point(0.0), point(1.0));
        let mismatch = start.iter().zip(&end).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if start.len() != end.len() || !(mismatch <= CLOSURE_TOL) {
            return Err(Error::OpenPath { label, mismatch });
        }
        Ok(ParameterPath {
            point: Arc::new(point),
            velocity: None,
            closed: true,
            label,
        })
    }

    /// A closed loop in which the coordinates listed in `angular` are
    /// 2π-periodic, so endpoints may differ by whole turns there.
    pub fn closed_angular(
        label: impl Into<String>,
        angular: &[usize],
        point: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        let label = label.into();
        let (start, end) = (point(0.0), point(1.0));
        let mismatch = start
            .iter()
            .zip(&end)
            .enumerate()
            .map(|(k, (a, b))| {
                let d = b - a;
                if angular.contains(&k) {
                    (d - 2.0 * PI * (d / (2.0 * PI)).round()).abs()
                } else {
                    d.abs()
                }
            })
            .fold(0.0, f64::max);
        if start.len() != end.len() || !(mismatch <= CLOSURE_TOL) {
            return Err(Error::OpenPath { label, mismatch });
        }
        Ok(ParameterPath {
            point: Arc::new(point),
            velocity: None,
            closed: true,
            label,
        })
    }

    pub fn with_velocity(mut self, velocity: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.velocity = Some(Arc::new(velocity));
        self
    }

    /// The full azimuthal circle `(θ, φ) = (θ₀, 2πs)`.
    pub fn azimuthal_loop(theta: f64) -> Self {
        ParameterPath {
            point: Arc::new(move |s| vec![theta, 2.0 * PI * s]),
            velocity: Some(Arc::new(|_| vec![0.0, 2.0 * PI])),
            closed: true,
            label: format!("azimuthal loop at theta={theta}"),
        }
    }

    /// Circle in the last coordinate, all leading coordinates held fixed:
    /// `(c₀, …, c_{n-1}, 2πs)`.
    pub fn phase_loop(fixed: Vec<f64>, label: impl Into<String>) -> Self {
        let n = fixed.len();
        let fixed_pt = fixed.clone();
        ParameterPath {
            point: Arc::new(move |s| {
                let mut p = fixed_pt.clone();
                p.push(2.0 * PI * s);
                p
            }),
            velocity: Some(Arc::new(move |_| {
                let mut v = vec![0.0; n];
                v.push(2.0 * PI);
                v
            })),
            closed: true,
            label: label.into(),
        }
    }

    /// The degenerate loop that never leaves `point`.
    pub fn constant(point: ParameterPoint) -> Self {
        let coords = point.coords().to_vec();
        let n = coords.len();
        ParameterPath {
            point: Arc::new(move |_| coords.clone()),
            velocity: Some(Arc::new(move |_| vec![0.0; n])),
            closed: true,
            label: "constant".into(),
        }
    }

    /// Same curve traversed from `s = 1` back to `s = 0`.
    pub fn reversed(&self) -> Self {
        let point = self.point.clone();
        let velocity = self.velocity.clone();
        ParameterPath {
            point: Arc::new(move |s| point(1.0 - s)),
            velocity: velocity.map(|v| -> PointFn { Arc::new(move |s| v(1.0 - s).into_iter().map(|x| -x).collect()) }),
            closed: self.closed,
            label: format!("{} (reversed)", self.label),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn at(&self, s: f64) -> ParameterPoint {
        ParameterPoint((self.point)(s))
    }

    pub fn velocity(&self, s: f64) -> Vec<f64> {
        if let Some(v) = &self.velocity {
            return v(s);
        }
        let h = VELOCITY_FD_STEP;
        let (lo, hi) = ((s - h).max(0.0), (s + h).min(1.0));
        let (a, b) = ((self.point)(lo), (self.point)(hi));
        a.iter().zip(&b).map(|(x, y)| (y - x) / (hi - lo)).collect()
    }

    /// Fails with [`Error::OpenPath`] unless the path is flagged closed.
    pub fn require_closed(&self) -> Result<()> {
        if self.closed {
            Ok(())
        } else {
            let (a, b) = (self.at(0.0), self.at(1.0));
            let mismatch = a
                .coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            Err(Error::OpenPath {
                label: self.label.clone(),
                mismatch,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_requires_matching_endpoints() {
        assert!(ParameterPath::closed("circle", |s| vec![1.0, (2.0 * PI * s).sin()]).is_ok());
        let err = ParameterPath::closed("segment", |s| vec![s]).unwrap_err();
        assert!(matches!(err, Error::OpenPath { .. }));
    }

    #[test]
    fn angular_coordinates_close_modulo_full_turns() {
        let p = ParameterPath::closed_angular("winding", &[1], |s| vec![0.5, 4.0 * PI * s]).unwrap();
        assert!(p.is_closed());
        assert!(ParameterPath::closed("winding", |s| vec![0.5, 2.0 * PI * s]).is_err());
        assert!(ParameterPath::closed_angular("half", &[1], |s| vec![0.5, PI * s]).is_err());
        assert!(ParameterPath::closed_angular("radial", &[1], |s| vec![s, 2.0 * PI * s]).is_err());
    }

    #[test]
    fn finite_difference_velocity_matches_analytic() {
        let p = ParameterPath::closed("c", |s| vec![(2.0 * PI * s).cos(), (2.0 * PI * s).sin()]).unwrap();
        for s in [0.0, 0.3, 1.0] {
            let v = p.velocity(s);
            let exact = [-2.0 * PI * (2.0 * PI * s).sin(), 2.0 * PI * (2.0 * PI * s).cos()];
            let tol = if s == 0.0 || s == 1.0 { 1e-4 } else { 1e-7 };
            for (a, b) in v.iter().zip(exact) {
                assert!((a - b).abs() < tol, "{a} vs {b} at s={s}");
            }
        }
    }

    #[test]
    fn reversal_flips_velocity() {
        let p = ParameterPath::azimuthal_loop(0.4).reversed();
        assert_eq!(p.at(0.25).coords(), &[0.4, 1.5 * PI]);
        assert_eq!(p.velocity(0.1), vec![-0.0, -2.0 * PI]);
        assert!(p.is_closed());
    }

    #[test]
    fn phase_loop_appends_angle() {
        let p = ParameterPath::phase_loop(vec![1.0, 2.0], "drive");
        assert_eq!(p.at(0.5).coords(), &[1.0, 2.0, PI]);
        assert_eq!(p.velocity(0.5), vec![0.0, 0.0, 2.0 * PI]);
    }
}
