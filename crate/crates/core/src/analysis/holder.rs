use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::region::{region_points, Sampling};
use crate::field::PhaseField;
use crate::galilean::kinetic_distance;
use crate::geometry::{Domain, KineticCylinder};
use crate::Result;

/// Cap on the number of points entering the pairwise maximum.
pub const MAX_HOLDER_POINTS: usize = 2000;

/// `sup |f(z₁) − f(z₂)| / dℓ(z₁, z₂)^α` over pairs of points of `H_r(z⁰)`.
///
/// Points are the grid nodes and stratified samples of the region, thinned
/// evenly to at most [`MAX_HOLDER_POINTS`].
pub fn holder_seminorm<F: PhaseField + ?Sized>(
    f: &F,
    region: &KineticCylinder<1>,
    dom: &Domain<1>,
    alpha: f64,
    opts: Sampling,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(crate::Error::Usage("Hölder exponent must lie in (0, 1]"));
    }
    let mut pts = region_points(f, region, dom, opts)?;
    if pts.len() > MAX_HOLDER_POINTS {
        let stride = pts.len() as f64 / MAX_HOLDER_POINTS as f64;
        pts = (0..MAX_HOLDER_POINTS).map(|k| pts[(k as f64 * stride) as usize]).collect::<Vec<_>>();
    }
    let mut best: f64 = 0.0;
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let diff = (pts[a].1 - pts[b].1).abs();
            if diff == 0.0 {
                continue;
            }
            let d = kinetic_distance(&pts[a].0, &pts[b].0);
            if d > 0.0 {
                best = best.max(diff / d.powf(alpha));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnField;
    use crate::galilean::PhasePoint;

    #[test]
    fn constant_is_zero_and_scaling_is_linear() {
        let cyl = KineticCylinder::new(PhasePoint::raw(0.0, [0.0], [0.0]), 0.5).unwrap();
        let opts = Sampling { samples: 300, seed: 1 };
        assert_eq!(holder_seminorm(&FnField(|_: &PhasePoint<1>| 2.0), &cyl, &Domain::Whole, 0.5, opts).unwrap(), 0.0);
        let f = |z: &PhasePoint<1>| z.v[0].sin() + z.x[0];
        let one = holder_seminorm(&FnField(f), &cyl, &Domain::Whole, 0.5, opts).unwrap();
        let two = holder_seminorm(&FnField(move |z: &PhasePoint<1>| 2.0 * f(z)), &cyl, &Domain::Whole, 0.5, opts).unwrap();
        assert!((two - 2.0 * one).abs() <= 1e-12 * two);
    }

    #[test]
    fn distance_power_has_unit_seminorm() {
        let z_ref = PhasePoint::raw(0.0, [0.0], [0.0]);
        let alpha = 0.5;
        let f = FnField(move |z: &PhasePoint<1>| kinetic_distance(z, &z_ref).powf(alpha));
        let cyl = KineticCylinder::new(z_ref, 0.5).unwrap();
        let s = holder_seminorm(&f, &cyl, &Domain::Whole, alpha, Sampling { samples: 600, seed: 2 }).unwrap();
        // lower bound from pairs through z_ref; the triangle inequality of dℓ
        // holds with a constant of at most 2, hence the upper bound 2^α
        assert!(s >= 1.0 - 1e-3 && s <= 2f64.powf(alpha) + 1e-9, "{s}");
    }
}
