//! Spatial domains, kinetic cylinders and boundary classification.
//!
//! The phase-space boundary `(0, T) × ∂Ω × ℝᵈ` splits by the sign of
//! `v·n(x)` into the incoming part `γ₋`, the outgoing part `γ₊` and the
//! grazing set `γ₀`.

mod cylinder;

use alloc::vec::Vec;

use crate::galilean::{PhasePoint, Vector};
use crate::transform::Chart;
use crate::{Error, Result};

pub use cylinder::{
    exterior_measure_exact_1d, inside_fraction, mu_star, qminus_exterior_measure, qminus_hypothesis, FractionMethod,
    KineticCylinder, QMinusReport, MU_STAR_1D,
};

/// Tolerance on `v·n` separating `γ₀` from `γ±`.
pub const GRAZING_TOL: f64 = 1e-12;
/// Tolerance on the signed distance for boundary membership.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// The open half-space `{x : x·n < offset}` with unit outward normal `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace<const D: usize> {
    pub normal: Vector<D>,
    pub offset: f64,
}

impl<const D: usize> HalfSpace<D> {
    pub fn new(normal: [f64; D], offset: f64) -> Result<Self> {
        let n = Vector::from(normal);
        let len = n.norm();
        if !len.is_finite() || !offset.is_finite() {
            return Err(Error::NonFinite { what: "half-space" });
        }
        if len == 0.0 {
            return Err(Error::Usage("half-space normal must be nonzero"));
        }
        Ok(Self { normal: n / len, offset: offset / len })
    }

    /// Positive outside, zero on the boundary.
    #[inline]
    pub fn signed_distance(&self, x: &Vector<D>) -> f64 {
        x.dot(&self.normal) - self.offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain<const D: usize> {
    /// `ℝᵈ`: no boundary.
    Whole,
    HalfSpace(HalfSpace<D>),
    /// Intersection of half-spaces.
    Polytope(Vec<HalfSpace<D>>),
    /// `Ω = {x : φ₁(x) < 0}` for a chart `φ`.
    Chart { chart: Chart<D>, convex: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryClass {
    Incoming,
    Outgoing,
    Grazing,
    Interior,
    Exterior,
}

impl<const D: usize> Domain<D> {
    pub fn half_space(normal: [f64; D], offset: f64) -> Result<Self> {
        Ok(Self::HalfSpace(HalfSpace::new(normal, offset)?))
    }

    pub fn polytope(faces: &[([f64; D], f64)]) -> Result<Self> {
        let faces = faces.iter().map(|(n, c)| HalfSpace::new(*n, *c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::Polytope(faces))
    }

    pub fn chart(chart: Chart<D>, convex: bool) -> Self {
        Self::Chart { chart, convex }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Self::Chart { convex, .. } => *convex,
            _ => true,
        }
    }

    /// Strict membership `x ∈ Ω`.
    pub fn contains(&self, x: &Vector<D>) -> bool {
        match self {
            Self::Whole => true,
            Self::HalfSpace(h) => h.signed_distance(x) < 0.0,
            Self::Polytope(faces) => faces.iter().all(|h| h.signed_distance(x) < 0.0),
            Self::Chart { chart, .. } => chart.map(x)[0] < 0.0,
        }
    }

    /// Signed distance (negative inside) and outward unit normal of the
    /// nearest boundary piece. For charts the distance is the first-order
    /// estimate `φ₁ / |∇φ₁|`.
    pub fn locate(&self, x: &Vector<D>) -> Result<(f64, Option<Vector<D>>)> {
        match self {
            Self::Whole => Ok((f64::NEG_INFINITY, None)),
            Self::HalfSpace(h) => Ok((h.signed_distance(x), Some(h.normal))),
            Self::Polytope(faces) => {
                let best = faces
                    .iter()
                    .map(|h| (h.signed_distance(x), h.normal))
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .ok_or(Error::Usage("polytope without faces"))?;
                Ok((best.0, Some(best.1)))
            }
            Self::Chart { chart, .. } => {
                let phi = chart.map(x)[0];
                let grad = chart.jacobian(x).row(0).transpose();
                let g = grad.norm();
                if !(g > 1e-12) {
                    return Err(Error::AmbiguousBoundary { magnitude: phi.abs() });
                }
                Ok((phi / g, Some(grad / g)))
            }
        }
    }

    /// Outward unit normal at (or nearest to) `x`.
    pub fn normal(&self, x: &Vector<D>) -> Result<Vector<D>> {
        self.locate(x)?.1.ok_or(Error::NoIncomingBoundary)
    }
}

pub fn classify<const D: usize>(z: &PhasePoint<D>, dom: &Domain<D>) -> Result<BoundaryClass> {
    let (sd, n) = dom.locate(&z.x)?;
    if sd < -BOUNDARY_TOL {
        return Ok(BoundaryClass::Interior);
    }
    if sd > BOUNDARY_TOL {
        return Ok(BoundaryClass::Exterior);
    }
    let n = n.expect("bounded domain has a normal");
    let vn = z.v.dot(&n);
    Ok(if vn.abs() <= GRAZING_TOL {
        BoundaryClass::Grazing
    } else if vn < 0.0 {
        BoundaryClass::Incoming
    } else {
        BoundaryClass::Outgoing
    })
}

/// Trace weight `ω = min(|v·n|, (v·n)²)` at a boundary point.
pub fn trace_weight<const D: usize>(z: &PhasePoint<D>, dom: &Domain<D>) -> Result<f64> {
    let (sd, n) = dom.locate(&z.x)?;
    let Some(n) = n else {
        return Err(Error::NoIncomingBoundary);
    };
    if sd.abs() > 1e-9 {
        return Err(Error::NotOnBoundary { distance: sd });
    }
    let vn = z.v.dot(&n);
    Ok(vn.abs().min(vn * vn))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let half = Domain::half_space([1.0], 0.0).unwrap();
        assert_eq!(classify(&PhasePoint::raw(0.0, [0.0], [-1.0]), &half).unwrap(), BoundaryClass::Incoming);
        assert_eq!(classify(&PhasePoint::raw(0.0, [0.0], [1.0]), &half).unwrap(), BoundaryClass::Outgoing);
        assert_eq!(classify(&PhasePoint::raw(0.0, [-0.1], [1.0]), &half).unwrap(), BoundaryClass::Interior);
        assert_eq!(classify(&PhasePoint::raw(0.0, [0.1], [1.0]), &half).unwrap(), BoundaryClass::Exterior);
        let plane = Domain::half_space([1.0, 0.0], 0.0).unwrap();
        assert_eq!(classify(&PhasePoint::raw(0.0, [0.0, 0.0], [0.0, 1.0]), &plane).unwrap(), BoundaryClass::Grazing);
    }

    #[test]
    fn normals_are_unit() {
        let rotated = Domain::half_space([3.0, 4.0], 5.0).unwrap();
        let n = rotated.normal(&Vector::<2>::new(0.6, 0.8)).unwrap();
        assert!((n.norm() - 1.0).abs() < 1e-12);
        let disc = Domain::chart(Chart::<2>::quadratic(0.5, 1.9).unwrap(), true);
        // boundary of {x₁ + |x|²/4 < 0} is the circle of radius 2 about (−2, 0)
        let x = Vector::<2>::new(-2.0 + 2.0 * 0.3f64.cos(), 2.0 * 0.3f64.sin());
        let (sd, n) = disc.locate(&x).unwrap();
        assert!(sd.abs() < 1e-12);
        let n = n.unwrap();
        assert!((n.norm() - 1.0).abs() < 1e-12);
        assert!((n - Vector::<2>::new(0.3f64.cos(), 0.3f64.sin())).norm() < 1e-12);
    }

    #[test]
    fn membership_agrees_with_signed_distance() {
        let dom = Domain::polytope(&[([1.0, 0.0], 1.0), ([-1.0, 0.0], 1.0), ([0.0, 1.0], 0.5)]).unwrap();
        for (x, inside) in [([0.0, 0.0], true), ([0.9, 0.4], true), ([1.1, 0.0], false), ([0.0, 0.6], false)] {
            let x = Vector::<2>::from(x);
            assert_eq!(dom.contains(&x), inside);
            assert_eq!(dom.locate(&x).unwrap().0 < 0.0, inside);
        }
    }

    #[test]
    fn trace_weight_examples() {
        let half = Domain::half_space([1.0], 0.0).unwrap();
        let w = |v: f64| trace_weight(&PhasePoint::raw(0.0, [0.0], [v]), &half).unwrap();
        assert_eq!(w(-2.0), 2.0);
        assert_eq!(w(0.5), 0.25);
        assert_eq!(w(0.0), 0.0);
        assert!(matches!(trace_weight(&PhasePoint::raw(0.0, [-0.5], [1.0]), &half), Err(Error::NotOnBoundary { .. })));
    }
}
