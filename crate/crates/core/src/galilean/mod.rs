//! The Galilean group on phase space `ℝ × ℝᴰ × ℝᴰ`.
//!
//! ```text
//! (t₁, x₁, v₁) ∘ (t₂, x₂, v₂) = (t₁ + t₂, x₁ + x₂ + t₂ v₁, v₁ + v₂)
//! (t, x, v)⁻¹                 = (−t, −x + t v, −v)
//! S_r (t, x, v)               = (r² t, r³ x, r v)
//! ```
//!
//! Left translations `z ↦ z₀ ∘ z` commute with the transport operator
//! `∂t + v·∇x` and with `∇v`; the kinetic distance in [`distance`] is
//! invariant under them and one-homogeneous under `S_r`.

mod convolve;
pub mod distance;
mod mollifier;

use core::ops::Mul;

use nalgebra::SVector;

use crate::{Error, Result};

pub use convolve::group_convolve;
pub use distance::{
    distance_to_incoming, kinetic_distance, kinetic_distance_grid, kinetic_distance_with_witness, nearest_incoming_state,
    state_gap, DistanceWitness, IncomingWitness,
};
pub use mollifier::{build_mollifier, MollifierKernel, Orientation, Sign};

pub type Vector<const D: usize> = SVector<f64, D>;

/// An event `z = (t, x, v)` in phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<const D: usize> {
    pub t: f64,
    pub x: Vector<D>,
    pub v: Vector<D>,
}

impl<const D: usize> PhasePoint<D> {
    pub const IDENTITY: Self = Self {
        t: 0.0,
        x: Vector::<D>::from_array_storage(nalgebra::ArrayStorage([[0.0; D]; 1])),
        v: Vector::<D>::from_array_storage(nalgebra::ArrayStorage([[0.0; D]; 1])),
    };

    /// Validating constructor; rejects NaN and infinite components.
    pub fn new(t: f64, x: [f64; D], v: [f64; D]) -> Result<Self> {
        let z = Self::raw(t, x, v);
        if !z.is_finite() {
            return Err(Error::NonFinite { what: "phase point" });
        }
        Ok(z)
    }

    /// Construct without validation.
    #[inline]
    pub fn raw(t: f64, x: [f64; D], v: [f64; D]) -> Self {
        Self { t, x: Vector::from(x), v: Vector::from(v) }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().all(|c| c.is_finite()) && self.v.iter().all(|c| c.is_finite())
    }

    /// Group product `self ∘ other`.
    #[inline]
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            t: self.t + other.t,
            x: self.x + other.x + self.v * other.t,
            v: self.v + other.v,
        }
    }

    #[inline]
    pub fn inverse(&self) -> Self {
        Self { t: -self.t, x: -self.x + self.v * self.t, v: -self.v }
    }

    /// Kinetic dilation `S_r`. Callers must ensure `r > 0`; see [`scale`].
    #[inline]
    pub fn dilate(&self, r: f64) -> Self {
        Self { t: r * r * self.t, x: self.x * (r * r * r), v: self.v * r }
    }

    /// Componentwise maximum absolute difference; used by tests and tolerances.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = (self.t - other.t).abs();
        for i in 0..D {
            m = m.max((self.x[i] - other.x[i]).abs());
            m = m.max((self.v[i] - other.v[i]).abs());
        }
        m
    }
}

impl<const D: usize> Default for PhasePoint<D> {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl<const D: usize> Mul for PhasePoint<D> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

pub fn compose<const D: usize>(z1: &PhasePoint<D>, z2: &PhasePoint<D>) -> PhasePoint<D> {
    z1.compose(z2)
}

pub fn invert<const D: usize>(z: &PhasePoint<D>) -> PhasePoint<D> {
    z.inverse()
}

/// Kinetic scaling `S_r z = (r² t, r³ x, r v)`.
pub fn scale<const D: usize>(r: f64, z: &PhasePoint<D>) -> Result<PhasePoint<D>> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonPositive { what: "scaling factor", value: r });
    }
    Ok(z.dilate(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p1(t: f64, x: f64, v: f64) -> PhasePoint<1> {
        PhasePoint::raw(t, [x], [v])
    }

    #[test]
    fn identity_is_neutral() {
        let z = p1(0.3, -1.2, 2.5);
        assert_eq!(PhasePoint::IDENTITY.compose(&z), z);
        assert_eq!(z.compose(&PhasePoint::IDENTITY), z);
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose(&p1(1.0, 0.0, 3.0), &p1(1.0, 0.0, 0.0)), p1(2.0, 3.0, 3.0));
        // non-commutative
        assert_eq!(compose(&p1(1.0, 0.0, 1.0), &p1(0.0, 0.0, 1.0)), p1(1.0, 0.0, 2.0));
        assert_eq!(compose(&p1(0.0, 0.0, 1.0), &p1(1.0, 0.0, 1.0)), p1(1.0, 1.0, 2.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(invert(&PhasePoint::<1>::IDENTITY), PhasePoint::IDENTITY);
        assert_eq!(invert(&p1(1.0, 2.0, 3.0)), p1(-1.0, 1.0, -3.0));
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(scale(2.0, &p1(1.0, 1.0, 1.0)).unwrap(), p1(4.0, 8.0, 2.0));
        let z = p1(0.7, -0.2, 1.1);
        assert_eq!(scale(1.0, &z).unwrap(), z);
        assert!(matches!(scale(0.0, &z), Err(Error::NonPositive { .. })));
        assert!(scale(-1.0, &z).is_err());
    }

    #[test]
    fn constructor_rejects_nan() {
        assert!(PhasePoint::<2>::new(0.0, [f64::NAN, 0.0], [0.0, 0.0]).is_err());
        assert!(PhasePoint::<1>::new(f64::INFINITY, [0.0], [0.0]).is_err());
    }

    fn point2() -> impl Strategy<Value = PhasePoint<2>> {
        prop::array::uniform5(-3.0..3.0f64).prop_map(|c| PhasePoint::raw(c[0], [c[1], c[2]], [c[3], c[4]]))
    }

    proptest! {
        #[test]
        fn associativity(a in point2(), b in point2(), c in point2()) {
            let lhs = a.compose(&b).compose(&c);
            let rhs = a.compose(&b.compose(&c));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn inverse_both_sides(z in point2()) {
            prop_assert!(z.compose(&z.inverse()).max_abs_diff(&PhasePoint::IDENTITY) < 1e-12);
            prop_assert!(z.inverse().compose(&z).max_abs_diff(&PhasePoint::IDENTITY) < 1e-12);
            prop_assert!(z.inverse().inverse().max_abs_diff(&z) < 1e-12);
        }

        #[test]
        fn dilation_group(z in point2(), r in 0.1..5.0f64) {
            let back = scale(r, &scale(1.0 / r, &z).unwrap()).unwrap();
            prop_assert!(back.max_abs_diff(&z) < 1e-11);
        }
    }
}
