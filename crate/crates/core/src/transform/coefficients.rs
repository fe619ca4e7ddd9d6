//! Coefficient samplers `a(t, x, v)`, `b(t, x, v)`, `G(t, x, v)`.

use alloc::sync::Arc;

use super::chart::{symmetric_eigen_range, Chart, Matrix};
use crate::galilean::{PhasePoint, Vector};
use crate::{Error, Result};

/// Declared bounds `λ I ≤ a ≤ Λ I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipticity {
    pub lambda: f64,
    pub big_lambda: f64,
}

impl Ellipticity {
    pub fn new(lambda: f64, big_lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositive { what: "ellipticity lower bound λ", value: lambda });
        }
        if !(big_lambda >= lambda) || !big_lambda.is_finite() {
            return Err(Error::Usage("ellipticity bounds need 0 < λ ≤ Λ < ∞"));
        }
        Ok(Self { lambda, big_lambda })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSample<const D: usize> {
    pub a: Matrix<D>,
    pub b: Vector<D>,
    pub g: f64,
}

pub trait CoefficientField<const D: usize>: Send + Sync {
    fn sample(&self, z: &PhasePoint<D>) -> Result<CoefficientSample<D>>;
    fn ellipticity(&self) -> Ellipticity;
}

impl<const D: usize, T: CoefficientField<D> + ?Sized> CoefficientField<D> for Arc<T> {
    fn sample(&self, z: &PhasePoint<D>) -> Result<CoefficientSample<D>> {
        (**self).sample(z)
    }

    fn ellipticity(&self) -> Ellipticity {
        (**self).ellipticity()
    }
}

impl<const D: usize, T: CoefficientField<D> + ?Sized> CoefficientField<D> for &T {
    fn sample(&self, z: &PhasePoint<D>) -> Result<CoefficientSample<D>> {
        (**self).sample(z)
    }

    fn ellipticity(&self) -> Ellipticity {
        (**self).ellipticity()
    }
}

/// Smallest and largest eigenvalue of the symmetric part of `a`, and the
/// asymmetry `max |a − aᵀ|`.
pub fn eigen_range<const D: usize>(a: &Matrix<D>) -> (f64, f64, f64) {
    let (lo, hi) = symmetric_eigen_range(a);
    let asym = (a - a.transpose()).abs().max();
    (lo, hi, asym)
}

/// Check a sample against declared bounds, with relative slack `tol`.
pub fn check_ellipticity<const D: usize>(a: &Matrix<D>, e: Ellipticity, tol: f64) -> bool {
    let (lo, hi, asym) = eigen_range(a);
    asym <= 1e-12 * (1.0 + hi.abs()) && lo >= e.lambda * (1.0 - tol) && hi <= e.big_lambda * (1.0 + tol)
}

type MatrixFn<const D: usize> = Arc<dyn Fn(&PhasePoint<D>) -> Matrix<D> + Send + Sync>;
type VectorFn<const D: usize> = Arc<dyn Fn(&PhasePoint<D>) -> Vector<D> + Send + Sync>;
type ScalarFn<const D: usize> = Arc<dyn Fn(&PhasePoint<D>) -> f64 + Send + Sync>;

/// Coefficients given by closures.
#[derive(Clone)]
pub struct FnCoefficients<const D: usize> {
    a: MatrixFn<D>,
    b: VectorFn<D>,
    g: ScalarFn<D>,
    ellipticity: Ellipticity,
}

impl<const D: usize> FnCoefficients<D> {
    pub fn new(
        a: impl Fn(&PhasePoint<D>) -> Matrix<D> + Send + Sync + 'static,
        ellipticity: Ellipticity,
    ) -> Self {
        Self { a: Arc::new(a), b: Arc::new(|_| Vector::zeros()), g: Arc::new(|_| 0.0), ellipticity }
    }

    /// `a ≡ scalar · I`, `b ≡ drift`, `G ≡ source`.
    pub fn constant(scalar: f64, drift: [f64; D], source: f64) -> Result<Self> {
        let e = Ellipticity::new(scalar, scalar)?;
        let b = Vector::from(drift);
        Ok(Self {
            a: Arc::new(move |_| Matrix::identity() * scalar),
            b: Arc::new(move |_| b),
            g: Arc::new(move |_| source),
            ellipticity: e,
        })
    }

    pub fn with_drift(mut self, b: impl Fn(&PhasePoint<D>) -> Vector<D> + Send + Sync + 'static) -> Self {
        self.b = Arc::new(b);
        self
    }

    pub fn with_source(mut self, g: impl Fn(&PhasePoint<D>) -> f64 + Send + Sync + 'static) -> Self {
        self.g = Arc::new(g);
        self
    }
}

impl<const D: usize> CoefficientField<D> for FnCoefficients<D> {
    fn sample(&self, z: &PhasePoint<D>) -> Result<CoefficientSample<D>> {
        Ok(CoefficientSample { a: (self.a)(z), b: (self.b)(z), g: (self.g)(z) })
    }

    fn ellipticity(&self) -> Ellipticity {
        self.ellipticity
    }
}

/// Coefficients transported by a chart, evaluated lazily at `(t, y, w)`.
#[derive(Clone)]
pub struct Pushed<const D: usize, C> {
    chart: Chart<D>,
    inner: C,
}

/// `ã = A a Aᵀ`, `b̃ᵢ = (A b)ᵢ + vᵀ D²φᵢ v`, `G̃ = G`, with `A = Dφ(x)`,
/// `(x, v) = Φ⁻¹(y, w)`.
pub fn push_coefficients<const D: usize, C: CoefficientField<D>>(chart: &Chart<D>, c: C) -> Pushed<D, C> {
    Pushed { chart: *chart, inner: c }
}

impl<const D: usize, C: CoefficientField<D>> CoefficientField<D> for Pushed<D, C> {
    fn sample(&self, z: &PhasePoint<D>) -> Result<CoefficientSample<D>> {
        let x = self.chart.inverse_map(&z.x)?;
        let (a_mat, a_inv) = self.chart.checked_jacobian(&x)?;
        let v = a_inv * z.v;
        let s = self.inner.sample(&PhasePoint { t: z.t, x, v })?;
        let mut b = a_mat * s.b;
        for i in 0..D {
            b[i] += (v.transpose() * self.chart.hessian(i, &x) * v)[(0, 0)];
        }
        let a = a_mat * s.a * a_mat.transpose();
        Ok(CoefficientSample { a: (a + a.transpose()) * 0.5, b, g: s.g })
    }

    fn ellipticity(&self) -> Ellipticity {
        let e = self.inner.ellipticity();
        let bd = self.chart.bounds();
        Ellipticity {
            lambda: e.lambda / (bd.inverse_jacobian * bd.inverse_jacobian),
            big_lambda: e.big_lambda * bd.jacobian * bd.jacobian,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, uniform};

    #[test]
    fn identity_chart_is_transparent() {
        let c = FnCoefficients::<2>::constant(1.5, [0.3, -0.2], 0.7).unwrap();
        let p = push_coefficients(&Chart::identity(), c.clone());
        let z = PhasePoint::<2>::raw(0.1, [0.2, 0.3], [1.0, -1.0]);
        assert_eq!(p.sample(&z).unwrap(), c.sample(&z).unwrap());
    }

    #[test]
    fn linear_scaling_example() {
        let c = FnCoefficients::<1>::constant(1.0, [0.0], 0.25).unwrap();
        let p = push_coefficients(&Chart::linear([[2.0]]).unwrap(), c);
        let s = p.sample(&PhasePoint::raw(0.0, [0.6], [-1.2])).unwrap();
        assert_eq!(s.a[(0, 0)], 4.0);
        assert_eq!(s.b[0], 0.0);
        assert_eq!(s.g, 0.25);
    }

    #[test]
    fn curvature_produces_quadratic_drift() {
        let c = FnCoefficients::<1>::constant(1.0, [0.0], 0.0).unwrap();
        let p = push_coefficients(&Chart::quadratic(1.0, 0.5).unwrap(), c);
        for v in [-2.0, 0.5, 3.0] {
            let s = p.sample(&PhasePoint::raw(0.0, [0.0], [v])).unwrap();
            assert!((s.b[0] - v * v).abs() < 1e-14);
        }
    }

    #[test]
    fn ellipticity_is_preserved() {
        let mut rng = stream(8, 0);
        let base = FnCoefficients::<2>::new(
            |z| {
                let s = 1.0 + 0.5 * (3.0 * z.x[0]).sin();
                Matrix::<2>::new(s, 0.3, 0.3, 1.2)
            },
            Ellipticity::new(0.45, 1.9).unwrap(),
        );
        for chart in [Chart::<2>::linear([[2.0, 0.5], [0.0, 0.7]]).unwrap(), Chart::<2>::quadratic(0.6, 1.0).unwrap()] {
            let p = push_coefficients(&chart, base.clone());
            let e = p.ellipticity();
            for _ in 0..1000 {
                let x = Vector::<2>::new(uniform(&mut rng, -0.6, 0.6), uniform(&mut rng, -0.6, 0.6));
                let y = chart.map(&x);
                let z = PhasePoint { t: 0.0, x: y, v: Vector::<2>::new(uniform(&mut rng, -2.0, 2.0), 0.4) };
                let s = p.sample(&z).unwrap();
                assert!(check_ellipticity(&s.a, e, 1e-12), "{:?} vs {e:?}", eigen_range(&s.a));
            }
        }
    }

    #[test]
    fn pushing_back_recovers_the_original() {
        let chart = Chart::<2>::linear([[1.5, 0.2], [-0.4, 0.9]]).unwrap();
        let base = FnCoefficients::<2>::new(
            |z| Matrix::<2>::new(1.0 + z.v[0] * z.v[0] * 0.1, 0.1, 0.1, 1.0 + z.x[1].abs()),
            Ellipticity::new(0.5, 4.0).unwrap(),
        )
        .with_drift(|z| Vector::<2>::new(z.x[0], -z.v[1]))
        .with_source(|z| z.t + z.x[1]);
        let back = push_coefficients(&chart.inverse_chart().unwrap(), push_coefficients(&chart, base.clone()));
        let z = PhasePoint::<2>::raw(0.3, [0.2, -0.4], [1.1, -0.6]);
        let (s0, s1) = (base.sample(&z).unwrap(), back.sample(&z).unwrap());
        assert!((s0.a - s1.a).abs().max() < 1e-12);
        assert!((s0.b - s1.b).abs().max() < 1e-12);
        assert!((s0.g - s1.g).abs() < 1e-12);
    }
}
