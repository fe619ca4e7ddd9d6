//! One-sided mollifiers.
//!
//! The profile is the tensor bump `ψ(s) = (35/32)(1 − s²)³` on `(−1, 1)`,
//! shifted by one unit along `t`, `x₁` and `v₁` according to the orientation
//! so that the support sits in a chosen octant. At scale `ε`
//!
//! ```text
//! η_ε(t, x, v) = ε^{−(2+4d)} η(ε⁻² t, ε⁻³ x, ε⁻¹ v)
//! ```
//!
//! has unit mass and support half-widths `(ε², ε³, ε)`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use super::{PhasePoint, Vector};
use crate::rng::{stream, uniform};
use crate::{Error, Result};

const PROFILE_CONSTANT: f64 = 35.0 / 32.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    fn shift(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Zero => 0.0,
            Sign::Plus => 1.0,
        }
    }
}

/// Placement of the support along `(t, x₁, v₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orientation {
    pub t: Sign,
    pub x: Sign,
    pub v: Sign,
}

impl Orientation {
    /// Support in `{t > 0} ∩ {x₁ > 0} ∩ {v₁ < 0}`.
    pub const INFLUX: Self = Self { t: Sign::Plus, x: Sign::Plus, v: Sign::Minus };
    pub const CENTERED: Self = Self { t: Sign::Zero, x: Sign::Zero, v: Sign::Zero };
}

#[inline]
fn profile(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - s * s;
        PROFILE_CONSTANT * q * q * q
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierKernel<const D: usize> {
    pub eps: f64,
    pub orientation: Orientation,
}

pub fn build_mollifier<const D: usize>(eps: f64, orientation: Orientation) -> Result<MollifierKernel<D>> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::NonPositive { what: "mollifier scale", value: eps });
    }
    Ok(MollifierKernel { eps, orientation })
}

impl<const D: usize> MollifierKernel<D> {
    /// Centre of the unit-scale support box.
    fn unit_center(&self) -> PhasePoint<D> {
        let mut c = PhasePoint::<D>::IDENTITY;
        c.t = self.orientation.t.shift();
        c.x[0] = self.orientation.x.shift();
        c.v[0] = self.orientation.v.shift();
        c
    }

    /// Value of the unit-scale kernel `η`.
    fn unit_eval(&self, z: &PhasePoint<D>) -> f64 {
        let c = self.unit_center();
        let mut val = profile(z.t - c.t);
        for i in 0..D {
            val *= profile(z.x[i] - c.x[i]) * profile(z.v[i] - c.v[i]);
        }
        val
    }

    pub fn eval(&self, z: &PhasePoint<D>) -> f64 {
        let e = self.eps;
        let jac = e.powi(-(2 + 4 * D as i32));
        jac * self.unit_eval(&z.dilate(1.0 / e))
    }

    /// Closed support box `(lower corner, upper corner)`.
    pub fn support_box(&self) -> (PhasePoint<D>, PhasePoint<D>) {
        let c = self.unit_center();
        let one = PhasePoint::<D> { t: 1.0, x: Vector::repeat(1.0), v: Vector::repeat(1.0) };
        let lo = PhasePoint { t: c.t - one.t, x: c.x - one.x, v: c.v - one.v };
        let hi = PhasePoint { t: c.t + one.t, x: c.x + one.x, v: c.v + one.v };
        (lo.dilate(self.eps), hi.dilate(self.eps))
    }

    /// Midpoint-rule mass over the support box with `n` cells per axis.
    ///
    /// The kernel is separable, so the full quadrature is a product of
    /// one-dimensional sums.
    pub fn mass_with(&self, n: usize) -> f64 {
        let (lo, hi) = self.support_box();
        let c = self.unit_center().dilate(self.eps);
        let axis = |a: f64, b: f64, center: f64, width: f64| -> f64 {
            let h = (b - a) / n as f64;
            (0..n).map(|k| profile((a + (k as f64 + 0.5) * h - center) / width)).sum::<f64>() * h / width
        };
        let e = self.eps;
        let mut m = axis(lo.t, hi.t, c.t, e * e);
        for i in 0..D {
            m *= axis(lo.x[i], hi.x[i], c.x[i], e * e * e);
            m *= axis(lo.v[i], hi.v[i], c.v[i], e);
        }
        m
    }

    pub fn mass(&self) -> f64 {
        self.mass_with(400)
    }

    /// Uniform samples from the open support box.
    pub fn sample_support(&self, n: usize, seed: u64) -> Vec<PhasePoint<D>> {
        let (lo, hi) = self.support_box();
        let mut rng = stream(seed, 0);
        let open = |a: f64, b: f64, rng: &mut crate::rng::ChaCha8Rng| loop {
            let s = uniform(rng, a, b);
            if s > a && s < b {
                return s;
            }
        };
        (0..n)
            .map(|_| {
                let mut z = PhasePoint::<D>::IDENTITY;
                z.t = open(lo.t, hi.t, &mut rng);
                for i in 0..D {
                    z.x[i] = open(lo.x[i], hi.x[i], &mut rng);
                    z.v[i] = open(lo.v[i], hi.v[i], &mut rng);
                }
                z
            })
            .collect()
    }
}
