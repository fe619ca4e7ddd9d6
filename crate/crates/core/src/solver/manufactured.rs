//! Forcing terms for manufactured solutions.

#[allow(unused_imports)]
use num_traits::Float;

use crate::galilean::PhasePoint;
use crate::transform::CoefficientField;

type Scalar3 = fn(f64, f64, f64) -> f64;

/// A closed-form field with the derivatives the forcing needs.
#[derive(Debug, Clone, Copy)]
pub struct ExactSolution {
    pub f: Scalar3,
    pub f_t: Scalar3,
    pub f_x: Scalar3,
    pub f_v: Scalar3,
    pub f_vv: Scalar3,
}

impl ExactSolution {
    /// `f* = e^{−t} sin x cos v`.
    pub const SINE_COSINE: Self = Self {
        f: |t, x, v| (-t).exp() * x.sin() * v.cos(),
        f_t: |t, x, v| -(-t).exp() * x.sin() * v.cos(),
        f_x: |t, x, v| (-t).exp() * x.cos() * v.cos(),
        f_v: |t, x, v| -(-t).exp() * x.sin() * v.sin(),
        f_vv: |t, x, v| -(-t).exp() * x.sin() * v.cos(),
    };

    pub fn value(&self, z: &PhasePoint<1>) -> f64 {
        (self.f)(z.t, z.x[0], z.v[0])
    }
}

/// `G = (∂t + v ∂x) f* − ∂v(a ∂v f*) + b ∂v f*`.
///
/// `∂v(a ∂v f*)` is expanded as `a ∂vv f* + (∂v a) ∂v f*`, with `∂v a` a
/// central difference over `±10⁻⁶` (exactly zero for `a` constant in `v`).
/// Sampling errors propagate as NaN, which the solver rejects.
pub fn manufactured_source<C: CoefficientField<1>>(
    exact: ExactSolution,
    c: C,
) -> impl Fn(&PhasePoint<1>) -> f64 + Send + Sync {
    move |z| {
        let (t, x, v) = (z.t, z.x[0], z.v[0]);
        let Ok(s) = c.sample(z) else { return f64::NAN };
        let h = 1e-6;
        let shifted = |dv: f64| c.sample(&PhasePoint::raw(t, [x], [v + dv])).map(|s| s.a[(0, 0)]);
        let (Ok(ap), Ok(am)) = (shifted(h), shifted(-h)) else { return f64::NAN };
        let da = (ap - am) / (2.0 * h);
        let fv = (exact.f_v)(t, x, v);
        (exact.f_t)(t, x, v) + v * (exact.f_x)(t, x, v) - (s.a[(0, 0)] * (exact.f_vv)(t, x, v) + da * fv) + s.b[0] * fv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::FnCoefficients;

    fn unit() -> FnCoefficients<1> {
        FnCoefficients::constant(1.0, [0.0], 0.0).unwrap()
    }

    #[test]
    fn hand_differentiated_examples() {
        let zero = |_: f64, _: f64, _: f64| 0.0;
        let constant = ExactSolution { f: |_, _, _| 3.0, f_t: zero, f_x: zero, f_v: zero, f_vv: zero };
        let linear = ExactSolution { f: |_, _, v| v, f_t: zero, f_x: zero, f_v: |_, _, _| 1.0, f_vv: zero };
        let square = ExactSolution { f: |_, _, v| v * v, f_t: zero, f_x: zero, f_v: |_, _, v| 2.0 * v, f_vv: |_, _, _| 2.0 };
        let z = PhasePoint::raw(0.3, [-0.4], [1.7]);
        assert_eq!(manufactured_source(constant, unit())(&z), 0.0);
        assert_eq!(manufactured_source(linear, unit())(&z), 0.0);
        assert_eq!(manufactured_source(square, unit())(&z), -2.0);
    }

    #[test]
    fn sine_cosine_forcing() {
        // G = v e^{−t} cos x cos v for a ≡ 1, b ≡ 0
        let g = manufactured_source(ExactSolution::SINE_COSINE, unit());
        let z = PhasePoint::raw(0.2, [-0.7], [0.9]);
        let want = 0.9 * (-0.2f64).exp() * (-0.7f64).cos() * 0.9f64.cos();
        assert!((g(&z) - want).abs() < 1e-14);
    }
}
