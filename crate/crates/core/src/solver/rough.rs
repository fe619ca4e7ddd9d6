//! Piecewise-constant rough diffusion coefficients.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::galilean::PhasePoint;
use crate::rng::{stream, uniform};
use crate::transform::{Ellipticity, FnCoefficients, Matrix};
use crate::{Error, Result};

/// A box in `(t, x, v)` cut into cells of the given sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPartition {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub size: [f64; 3],
}

/// `a(t, x, v)` constant on each cell, drawn uniformly from `[λ, Λ]`.
/// Points outside the box take the value of the nearest cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RoughDiffusion {
    partition: CellPartition,
    counts: [usize; 3],
    values: Vec<f64>,
    ellipticity: Ellipticity,
}

pub fn sample_rough_coefficients(
    seed: u64,
    lambda: f64,
    big_lambda: f64,
    partition: CellPartition,
) -> Result<RoughDiffusion> {
    let ellipticity = Ellipticity::new(lambda, big_lambda)?;
    let mut counts = [0usize; 3];
    for k in 0..3 {
        let (lo, hi, h) = (partition.lo[k], partition.hi[k], partition.size[k]);
        if !(h > 0.0) {
            return Err(Error::NonPositive { what: "cell size", value: h });
        }
        if !(hi > lo) {
            return Err(Error::Usage("cell partition box is empty"));
        }
        counts[k] = ((hi - lo) / h).ceil().max(1.0) as usize;
    }
    let mut rng = stream(seed, 0);
    let total = counts[0] * counts[1] * counts[2];
    let values = (0..total)
        .map(|_| if lambda == big_lambda { lambda } else { uniform(&mut rng, lambda, big_lambda) })
        .collect();
    Ok(RoughDiffusion { partition, counts, values, ellipticity })
}

impl RoughDiffusion {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ellipticity(&self) -> Ellipticity {
        self.ellipticity
    }

    pub fn value_at(&self, z: &PhasePoint<1>) -> f64 {
        let p = &self.partition;
        let coords = [z.t, z.x[0], z.v[0]];
        let mut idx = [0usize; 3];
        for k in 0..3 {
            let u = ((coords[k] - p.lo[k]) / p.size[k]).floor();
            idx[k] = (u.max(0.0) as usize).min(self.counts[k] - 1);
        }
        self.values[(idx[0] * self.counts[1] + idx[1]) * self.counts[2] + idx[2]]
    }

    /// Coefficient field with `a` from the cells, `b ≡ 0`, `G ≡ 0`.
    pub fn into_coefficients(self) -> FnCoefficients<1> {
        let e = self.ellipticity;
        let shared = Arc::new(self);
        FnCoefficients::new(move |z| Matrix::<1>::new(shared.value_at(z)), e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::CoefficientField;

    fn partition() -> CellPartition {
        CellPartition { lo: [0.0, -1.0, -3.0], hi: [1.0, 0.0, 3.0], size: [0.25, 0.25, 0.5] }
    }

    #[test]
    fn constant_when_bounds_coincide() {
        let r = sample_rough_coefficients(1, 1.0, 1.0, partition()).unwrap();
        assert!(r.values().iter().all(|&a| a == 1.0));
    }

    #[test]
    fn deterministic_and_bounded() {
        let a = sample_rough_coefficients(42, 0.5, 2.0, partition()).unwrap();
        let b = sample_rough_coefficients(42, 0.5, 2.0, partition()).unwrap();
        let c = sample_rough_coefficients(43, 0.5, 2.0, partition()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values(), c.values());
        assert!(a.values().iter().all(|&v| (0.5..=2.0).contains(&v)));
        assert_eq!(a.values().len(), 4 * 4 * 12);
        let field = a.into_coefficients();
        let s = field.sample(&PhasePoint::raw(5.0, [-7.0], [0.1])).unwrap();
        assert!((0.5..=2.0).contains(&s.a[(0, 0)]));
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(sample_rough_coefficients(1, 0.0, 1.0, partition()).is_err());
        assert!(sample_rough_coefficients(1, 2.0, 1.0, partition()).is_err());
    }
}
