//! Point sets and extrema over `H_r(z⁰) = Q_r(z⁰) ∩ {x ∈ Ω}`.

use alloc::vec::Vec;

use rand::Rng;

use crate::field::PhaseField;
use crate::galilean::PhasePoint;
use crate::geometry::{Domain, KineticCylinder};
use crate::rng::{stream, uniform_ball};
use crate::Result;

/// Stratified sampling options: `samples` points per region, stratified
/// in the time offset, drawn from stream `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { samples: 4096, seed: 0 }
    }
}

/// Extrema of a field over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionStats {
    pub min: f64,
    pub max: f64,
    /// `sup |f|`.
    pub sup: f64,
    pub count: usize,
}

impl RegionStats {
    pub const EMPTY: Self = Self { min: f64::INFINITY, max: f64::NEG_INFINITY, sup: 0.0, count: 0 };

    pub fn push(&mut self, v: f64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        self.sup = self.sup.max(v.abs());
        self.count += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        self.sup = self.sup.max(other.sup);
        self.count += other.count;
    }

    /// `max − min`, or zero for an empty region.
    pub fn oscillation(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.max - self.min
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.count == 0
    }
}

/// Grid nodes of `H_r(z⁰)` plus stratified interior samples, with values.
pub fn region_points<F: PhaseField + ?Sized>(
    f: &F,
    cyl: &KineticCylinder<1>,
    dom: &Domain<1>,
    opts: Sampling,
) -> Result<Vec<(PhasePoint<1>, f64)>> {
    let (lo, hi) = cyl.bounding_box();
    let mut out: Vec<(PhasePoint<1>, f64)> = f
        .nodes_in(&lo, &hi)
        .into_iter()
        .filter(|(z, _)| cyl.contains(z) && dom.contains(&z.x))
        .collect();
    // the centre belongs to Q_r (time offset 0 is included)
    if dom.contains(&cyl.center.x) && !out.iter().any(|(z, _)| z == &cyl.center) {
        out.push((cyl.center, f.eval(&cyl.center)?));
    }
    let mut rng = stream(opts.seed, 0x5eed);
    let n = opts.samples;
    for k in 0..n {
        let u = (k as f64 + rng.random::<f64>()) / n as f64;
        let unit = PhasePoint::<1> { t: -u, x: uniform_ball::<_, 1>(&mut rng, 1.0), v: uniform_ball::<_, 1>(&mut rng, 1.0) };
        let z = cyl.from_unit(&unit);
        if dom.contains(&z.x) {
            out.push((z, f.eval(&z)?));
        }
    }
    Ok(out)
}

/// Extrema over `H_r(z⁰)`; an empty intersection gives a degenerate result.
pub fn oscillation<F: PhaseField + ?Sized>(
    f: &F,
    z0: &PhasePoint<1>,
    r: f64,
    dom: &Domain<1>,
    opts: Sampling,
) -> Result<RegionStats> {
    let cyl = KineticCylinder::new(*z0, r)?;
    let mut stats = RegionStats::EMPTY;
    for (_, v) in region_points(f, &cyl, dom, opts)? {
        stats.push(v);
    }
    Ok(stats)
}

/// Extrema over nested regions `H_{r_k}(z⁰)` for decreasing radii.
///
/// Each region's statistics include every point gathered for the smaller
/// radii, so the oscillations are nonincreasing in `k` by construction.
pub fn nested_stats<F: PhaseField + ?Sized>(
    f: &F,
    z0: &PhasePoint<1>,
    radii: &[f64],
    dom: &Domain<1>,
    opts: Sampling,
) -> Result<Vec<RegionStats>> {
    let mut own = Vec::with_capacity(radii.len());
    for (k, &r) in radii.iter().enumerate() {
        let cyl = KineticCylinder::new(*z0, r)?;
        let mut s = RegionStats::EMPTY;
        let o = Sampling { samples: opts.samples, seed: opts.seed.wrapping_add(k as u64) };
        for (_, v) in region_points(f, &cyl, dom, o)? {
            s.push(v);
        }
        own.push(s);
    }
    for k in (0..own.len().saturating_sub(1)).rev() {
        let inner = own[k + 1];
        own[k].merge(&inner);
    }
    Ok(own)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnField;
    use crate::galilean::kinetic_distance;

    #[test]
    fn constant_field_has_no_oscillation() {
        let f = FnField(|_: &PhasePoint<1>| 3.0);
        let s = oscillation(&f, &PhasePoint::raw(0.0, [0.0], [0.0]), 0.5, &Domain::Whole, Sampling::default()).unwrap();
        assert_eq!(s.oscillation(), 0.0);
    }

    #[test]
    fn linear_in_velocity() {
        let f = FnField(|z: &PhasePoint<1>| z.v[0]);
        let s = oscillation(&f, &PhasePoint::raw(0.0, [-5.0], [0.3]), 0.25, &Domain::half_space([1.0], 0.0).unwrap(), Sampling::default()).unwrap();
        assert!((s.oscillation() - 0.5).abs() < 2e-3, "{}", s.oscillation());
    }

    #[test]
    fn square_root_of_distance() {
        let z0 = PhasePoint::raw(0.0, [0.0], [0.0]);
        let f = FnField(move |z: &PhasePoint<1>| kinetic_distance(z, &z0).sqrt());
        for r in [0.5, 0.25, 0.125] {
            let s = oscillation(&f, &z0, r, &Domain::Whole, Sampling { samples: 20_000, seed: 1 }).unwrap();
            // the distance to the centre ranges over [0, r) on Q_r
            assert!((s.oscillation() - r.sqrt()).abs() < 0.05 * r.sqrt(), "{r}: {}", s.oscillation());
        }
    }

    #[test]
    fn empty_region_is_flagged() {
        let f = FnField(|_: &PhasePoint<1>| 1.0);
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let s = oscillation(&f, &PhasePoint::raw(0.0, [5.0], [0.0]), 0.5, &dom, Sampling::default()).unwrap();
        assert!(s.is_degenerate());
        assert_eq!(s.oscillation(), 0.0);
    }

    #[test]
    fn nested_oscillations_are_monotone() {
        let f = FnField(|z: &PhasePoint<1>| (3.0 * z.x[0]).sin() + z.v[0] * z.t);
        let radii = [1.0, 0.5, 0.25, 0.125];
        let s = nested_stats(&f, &PhasePoint::raw(1.0, [0.0], [-1.0]), &radii, &Domain::half_space([1.0], 0.0).unwrap(), Sampling::default()).unwrap();
        for w in s.windows(2) {
            assert!(w[1].oscillation() <= w[0].oscillation());
        }
    }
}
