//! Boundary-flattening charts `Φ(x, v) = (φ(x), Dφ(x) v)`.

#[allow(unused_imports)]
use num_traits::Float;
use nalgebra::SMatrix;

use crate::galilean::{PhasePoint, Vector};
use crate::{Error, Result};

pub type Matrix<const D: usize> = SMatrix<f64, D, D>;

/// Pad a point to two coordinates for error reporting.
pub(crate) fn location<const D: usize>(x: &Vector<D>) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (k, slot) in out.iter_mut().enumerate().take(D.min(2)) {
        *slot = x[k];
    }
    out
}

/// Eigenvalues `(min, max)` of a symmetric matrix, `D ≤ 2`.
pub fn symmetric_eigen_range<const D: usize>(m: &Matrix<D>) -> (f64, f64) {
    match D {
        1 => (m[(0, 0)], m[(0, 0)]),
        2 => {
            let (a, b, d) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
            let mean = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            (mean - rad, mean + rad)
        }
        _ => panic!("unsupported dimension {D}"),
    }
}

/// Determinant, `D ≤ 2`.
pub fn determinant<const D: usize>(m: &Matrix<D>) -> f64 {
    match D {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => panic!("unsupported dimension {D}"),
    }
}

/// Spectral norm via the largest eigenvalue of `mᵀm`.
pub fn spectral_norm<const D: usize>(m: &Matrix<D>) -> f64 {
    let ata = m.transpose() * m;
    symmetric_eigen_range(&ata).1.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartKind<const D: usize> {
    Identity,
    /// `φ(x) = A x`.
    Linear(Matrix<D>),
    /// `φ₁(x) = x₁ + κ|x|²/2`, other components unchanged. The image of
    /// `{y₁ = 0}` is a sphere of curvature `κ`.
    Quadratic(f64),
}

/// Declared bounds over the chart domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartBounds {
    pub jacobian: f64,
    pub inverse_jacobian: f64,
    pub hessian: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart<const D: usize> {
    kind: ChartKind<D>,
    inverse: Matrix<D>,
    /// Chart domain is the ball `|x| ≤ radius`.
    radius: f64,
    bounds: ChartBounds,
}

impl<const D: usize> Chart<D> {
    pub fn identity() -> Self {
        Self {
            kind: ChartKind::Identity,
            inverse: Matrix::identity(),
            radius: f64::INFINITY,
            bounds: ChartBounds { jacobian: 1.0, inverse_jacobian: 1.0, hessian: 0.0 },
        }
    }

    /// Linear chart from a row-major matrix.
    pub fn linear(rows: [[f64; D]; D]) -> Result<Self> {
        let m = Matrix::<D>::from_fn(|i, j| rows[i][j]);
        if !m.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite { what: "chart matrix" });
        }
        let inverse = m.try_inverse().ok_or(Error::SingularJacobian { location: [0.0; 2] })?;
        Ok(Self {
            kind: ChartKind::Linear(m),
            inverse,
            radius: f64::INFINITY,
            bounds: ChartBounds { jacobian: spectral_norm(&m), inverse_jacobian: spectral_norm(&inverse), hessian: 0.0 },
        })
    }

    /// Quadratic chart valid on `|x| ≤ radius`, which requires `|κ| radius < 1`.
    pub fn quadratic(curvature: f64, radius: f64) -> Result<Self> {
        if !curvature.is_finite() {
            return Err(Error::NonFinite { what: "curvature" });
        }
        if !(radius > 0.0) {
            return Err(Error::NonPositive { what: "chart radius", value: radius });
        }
        let kr = curvature.abs() * radius;
        if kr >= 1.0 {
            return Err(Error::Usage("quadratic chart needs |curvature|·radius < 1"));
        }
        Ok(Self {
            kind: ChartKind::Quadratic(curvature),
            inverse: Matrix::identity(),
            radius,
            bounds: ChartBounds {
                jacobian: 1.0 + kr,
                inverse_jacobian: 1.0 + kr / (1.0 - kr),
                hessian: curvature.abs(),
            },
        })
    }

    pub fn kind(&self) -> &ChartKind<D> {
        &self.kind
    }

    pub fn bounds(&self) -> ChartBounds {
        self.bounds
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Chart of `φ⁻¹`, available for affine charts.
    pub fn inverse_chart(&self) -> Option<Self> {
        match self.kind {
            ChartKind::Identity => Some(Self::identity()),
            ChartKind::Linear(_) => {
                let inv = self.inverse;
                Self::linear(core::array::from_fn(|i| core::array::from_fn(|j| inv[(i, j)]))).ok()
            }
            ChartKind::Quadratic(_) => None,
        }
    }

    pub fn check_domain(&self, x: &Vector<D>) -> Result<()> {
        if !x.iter().all(|c| c.is_finite()) || x.norm() > self.radius {
            return Err(Error::OutsideChart { location: location(x) });
        }
        Ok(())
    }

    pub fn map(&self, x: &Vector<D>) -> Vector<D> {
        match &self.kind {
            ChartKind::Identity => *x,
            ChartKind::Linear(m) => m * x,
            ChartKind::Quadratic(k) => {
                let mut y = *x;
                y[0] += 0.5 * k * x.norm_squared();
                y
            }
        }
    }

    /// `Dφ(x)`.
    pub fn jacobian(&self, x: &Vector<D>) -> Matrix<D> {
        match &self.kind {
            ChartKind::Identity => Matrix::identity(),
            ChartKind::Linear(m) => *m,
            ChartKind::Quadratic(k) => {
                let mut a = Matrix::identity();
                for j in 0..D {
                    a[(0, j)] += k * x[j];
                }
                a
            }
        }
    }

    /// `D²φᵢ(x)`.
    pub fn hessian(&self, i: usize, _x: &Vector<D>) -> Matrix<D> {
        match &self.kind {
            ChartKind::Quadratic(k) if i == 0 => Matrix::identity() * *k,
            _ => Matrix::zeros(),
        }
    }

    /// `φ⁻¹(y)`.
    pub fn inverse_map(&self, y: &Vector<D>) -> Result<Vector<D>> {
        let x = match &self.kind {
            ChartKind::Identity => *y,
            ChartKind::Linear(_) => self.inverse * y,
            ChartKind::Quadratic(k) => {
                // κ/2 x₁² + x₁ + (κ/2|x'|² − y₁) = 0, root continuous at κ = 0
                let mut x = *y;
                let tail: f64 = (1..D).map(|i| y[i] * y[i]).sum();
                let rhs = y[0] - 0.5 * k * tail;
                let disc = 1.0 + 2.0 * k * rhs;
                if disc < 0.0 {
                    return Err(Error::OutsideChart { location: location(y) });
                }
                x[0] = 2.0 * rhs / (1.0 + disc.sqrt());
                x
            }
        };
        self.check_domain(&x)?;
        Ok(x)
    }

    /// `Dφ(x)` with an invertibility check.
    pub fn checked_jacobian(&self, x: &Vector<D>) -> Result<(Matrix<D>, Matrix<D>)> {
        let a = self.jacobian(x);
        let det = determinant(&a);
        if !(det.abs() > 1e-12) {
            return Err(Error::SingularJacobian { location: location(x) });
        }
        let inv = a.try_inverse().ok_or(Error::SingularJacobian { location: location(x) })?;
        Ok((a, inv))
    }

    pub fn condition_number(&self, x: &Vector<D>) -> Result<f64> {
        let (a, inv) = self.checked_jacobian(x)?;
        Ok(spectral_norm(&a) * spectral_norm(&inv))
    }
}

/// `(t, x, v) ↦ (t, φ(x), Dφ(x) v)`.
pub fn flatten_point<const D: usize>(chart: &Chart<D>, z: &PhasePoint<D>) -> Result<PhasePoint<D>> {
    chart.check_domain(&z.x)?;
    let (a, _) = chart.checked_jacobian(&z.x)?;
    Ok(PhasePoint { t: z.t, x: chart.map(&z.x), v: a * z.v })
}

pub fn unflatten_point<const D: usize>(chart: &Chart<D>, z: &PhasePoint<D>) -> Result<PhasePoint<D>> {
    let x = chart.inverse_map(&z.x)?;
    let (_, inv) = chart.checked_jacobian(&x)?;
    Ok(PhasePoint { t: z.t, x, v: inv * z.v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, uniform};

    #[test]
    fn identity_leaves_points_alone() {
        let z = PhasePoint::<2>::raw(0.4, [1.0, -2.0], [0.5, 3.0]);
        assert_eq!(flatten_point(&Chart::identity(), &z).unwrap(), z);
    }

    #[test]
    fn linear_scaling_example() {
        let c = Chart::<1>::linear([[2.0]]).unwrap();
        let y = flatten_point(&c, &PhasePoint::raw(0.7, [1.0], [3.0])).unwrap();
        assert_eq!(y, PhasePoint::raw(0.7, [2.0], [6.0]));
        assert!(Chart::<2>::linear([[1.0, 2.0], [2.0, 4.0]]).is_err());
    }

    #[test]
    fn round_trips() {
        let charts = [
            Chart::<2>::linear([[2.0, 0.5], [-0.3, 1.0]]).unwrap(),
            Chart::<2>::quadratic(0.8, 1.0).unwrap(),
            Chart::<2>::quadratic(-0.5, 1.5).unwrap(),
        ];
        let mut rng = stream(5, 0);
        for c in &charts {
            for _ in 0..200 {
                let z = PhasePoint::<2>::raw(
                    uniform(&mut rng, -1.0, 1.0),
                    [uniform(&mut rng, -0.6, 0.6), uniform(&mut rng, -0.6, 0.6)],
                    [uniform(&mut rng, -3.0, 3.0), uniform(&mut rng, -3.0, 3.0)],
                );
                let back = unflatten_point(c, &flatten_point(c, &z).unwrap()).unwrap();
                assert!(back.max_abs_diff(&z) < 1e-10);
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let c = Chart::<2>::quadratic(0.7, 1.0).unwrap();
        let mut rng = stream(6, 0);
        for _ in 0..100 {
            let x = Vector::<2>::new(uniform(&mut rng, -0.6, 0.6), uniform(&mut rng, -0.6, 0.6));
            let h = 1e-6;
            let a = c.jacobian(&x);
            for j in 0..2 {
                let mut e = Vector::<2>::zeros();
                e[j] = h;
                let col = (c.map(&(x + e)) - c.map(&(x - e))) / (2.0 * h);
                for i in 0..2 {
                    assert!((col[i] - a[(i, j)]).abs() < 1e-6);
                }
            }
            assert!(c.condition_number(&x).unwrap() < 4.0);
        }
    }

    #[test]
    fn outside_domain_is_rejected() {
        let c = Chart::<1>::quadratic(1.0, 0.5).unwrap();
        assert!(matches!(
            flatten_point(&c, &PhasePoint::raw(0.0, [0.9], [0.0])),
            Err(Error::OutsideChart { .. })
        ));
        assert!(Chart::<1>::quadratic(2.0, 0.5).is_err());
    }
}
