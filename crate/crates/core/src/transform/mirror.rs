//! Even reflection across a flat boundary `{x·n = c}`.

use alloc::vec::Vec;

use super::{CoefficientField, CoefficientSample, Ellipticity, Matrix};
use crate::field::{Axis, Grid, SolutionField};
use crate::galilean::{PhasePoint, Vector};
use crate::geometry::{Domain, HalfSpace};
use crate::{Error, Result};

/// `R v = v − 2 (v·n) n` for a unit normal `n`.
pub fn reflect<const D: usize>(v: &Vector<D>, n: &Vector<D>) -> Vector<D> {
    v - n * (2.0 * v.dot(n))
}

/// Coefficients extended across the plane: inside `Ω` they are unchanged,
/// outside `ã = R a(t, Rx, Rv) R`, `b̃ = R b(t, Rx, Rv)`, `G̃ = G(t, Rx, Rv)`.
#[derive(Clone)]
pub struct Mirrored<const D: usize, C> {
    inner: C,
    plane: HalfSpace<D>,
}

impl<const D: usize, C> Mirrored<D, C> {
    pub fn new(inner: C, plane: HalfSpace<D>) -> Self {
        Self { inner, plane }
    }

    /// Reflection of a phase point through the plane.
    pub fn reflect_point(&self, z: &PhasePoint<D>) -> PhasePoint<D> {
        let n = self.plane.normal;
        let h = z.x.dot(&n) - self.plane.offset;
        PhasePoint { t: z.t, x: z.x - n * (2.0 * h), v: reflect(&z.v, &n) }
    }
}

impl<const D: usize, C: CoefficientField<D>> CoefficientField<D> for Mirrored<D, C> {
    fn sample(&self, z: &PhasePoint<D>) -> Result<CoefficientSample<D>> {
        if self.plane.signed_distance(&z.x) <= 0.0 {
            return self.inner.sample(z);
        }
        let s = self.inner.sample(&self.reflect_point(z))?;
        let n = self.plane.normal;
        let r = Matrix::<D>::identity() - n * n.transpose() * 2.0;
        Ok(CoefficientSample { a: r * s.a * r, b: r * s.b, g: s.g })
    }

    fn ellipticity(&self) -> Ellipticity {
        self.inner.ellipticity()
    }
}

/// Extend a field on one side of a flat boundary to the doubled interval
/// by `f̃(t, x, v) = f(t, Rx, Rv)`.
///
/// The field's `x` grid must end on the boundary and its velocity grid
/// must be symmetric about zero, so mirrored nodes coincide with stored ones.
pub fn mirror_extend<C: CoefficientField<1>>(
    f: &SolutionField,
    c: C,
    dom: &Domain<1>,
) -> Result<(SolutionField, Mirrored<1, C>)> {
    let Domain::HalfSpace(plane) = dom else {
        return Err(Error::NotFlat);
    };
    let g = f.grid();
    if g.periodic {
        return Err(Error::Usage("mirror extension of a periodic field"));
    }
    let tol = 1e-9 * g.x.step;
    if (g.v.start + g.v.end()).abs() > 1e-9 * g.v.step {
        return Err(Error::Usage("mirror extension needs a velocity grid symmetric about zero"));
    }
    let n = plane.normal[0];
    let wall = plane.offset * n;
    let nx = g.x.len;
    // outward normal +1: boundary at the right end; −1: at the left end
    let (start, on_wall) = if n > 0.0 {
        (g.x.start, (g.x.end() - wall).abs() <= tol)
    } else {
        (2.0 * wall - g.x.end(), (g.x.start - wall).abs() <= tol)
    };
    if !on_wall {
        return Err(Error::Usage("field grid must end on the mirror plane"));
    }
    let grid = Grid { times: g.times.clone(), x: Axis::new(start, g.x.step, 2 * nx - 1), v: g.v, periodic: false };
    let nv = g.v.len;
    let mut values = Vec::with_capacity(grid.size());
    for level in 0..g.times.len() {
        for k in 0..2 * nx - 1 {
            // index of the stored node (possibly through the mirror)
            let (i, flip) = if n > 0.0 {
                if k < nx { (k, false) } else { (2 * (nx - 1) - k, true) }
            } else if k < nx - 1 {
                (nx - 1 - k, true)
            } else {
                (k - (nx - 1), false)
            };
            for j in 0..nv {
                let jj = if flip { nv - 1 - j } else { j };
                values.push(f.value(level, i, jj));
            }
        }
    }
    Ok((SolutionField::new(grid, values)?, Mirrored::new(c, *plane)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PhaseField;
    use crate::transform::FnCoefficients;
    use alloc::vec;

    #[test]
    fn reflection_formula() {
        let n = Vector::<2>::new(1.0, 0.0);
        assert_eq!(reflect(&Vector::<2>::new(1.0, 2.0), &n), Vector::<2>::new(-1.0, 2.0));
    }

    #[test]
    fn drift_flips_across_the_plane() {
        let c = FnCoefficients::<2>::constant(1.0, [1.0, 0.0], 0.0).unwrap();
        let dom = Domain::half_space([1.0, 0.0], 0.0).unwrap();
        let Domain::HalfSpace(plane) = dom else { unreachable!() };
        let m = Mirrored::new(c, plane);
        let s = m.sample(&PhasePoint::raw(0.0, [0.3, 0.1], [0.5, 0.5])).unwrap();
        assert_eq!(s.b, Vector::<2>::new(-1.0, 0.0));
        let s = m.sample(&PhasePoint::raw(0.0, [-0.3, 0.1], [0.5, 0.5])).unwrap();
        assert_eq!(s.b, Vector::<2>::new(1.0, 0.0));
    }

    fn field() -> SolutionField {
        let grid = Grid { times: vec![0.0, 0.1], x: Axis::spanning(-1.0, 0.0, 5), v: Axis::cell_centered(-2.0, 2.0, 6), periodic: false };
        SolutionField::from_fn(grid, |z| z.t + 3.0 * z.x[0] + z.x[0] * z.v[0] + 0.2 * z.v[0]).unwrap()
    }

    #[test]
    fn extension_matches_reflected_values() {
        let f = field();
        let c = FnCoefficients::<1>::constant(1.0, [0.0], 0.0).unwrap();
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let (ext, _) = mirror_extend(&f, c, &dom).unwrap();
        assert_eq!(ext.grid().x.len, 9);
        for n in 0..2 {
            for i in 0..9 {
                for j in 0..6 {
                    let z = ext.node(n, i, j);
                    let zr = PhasePoint::raw(z.t, [-z.x[0]], [-z.v[0]]);
                    let want = if z.x[0] > 0.0 { f.eval(&zr) } else { f.eval(&z) }.unwrap();
                    assert!((ext.value(n, i, j) - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn left_boundary_extension() {
        let grid = Grid { times: vec![0.0], x: Axis::spanning(0.0, 1.0, 5), v: Axis::cell_centered(-1.0, 1.0, 4), periodic: false };
        let f = SolutionField::from_fn(grid, |z| z.x[0] + 10.0 * z.v[0]).unwrap();
        let c = FnCoefficients::<1>::constant(1.0, [0.0], 0.0).unwrap();
        let dom = Domain::half_space([-1.0], 0.0).unwrap();
        let (ext, _) = mirror_extend(&f, c, &dom).unwrap();
        assert!((ext.grid().x.start + 1.0).abs() < 1e-15);
        for i in 0..9 {
            for j in 0..4 {
                let z = ext.node(0, i, j);
                let want = z.x[0].abs() + 10.0 * if z.x[0] < 0.0 { -z.v[0] } else { z.v[0] };
                assert!((ext.value(0, i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_fields_are_unchanged() {
        let grid = Grid { times: vec![0.0], x: Axis::spanning(-1.0, 1.0, 9), v: Axis::cell_centered(-1.0, 1.0, 4), periodic: false };
        let sym = |z: &PhasePoint<1>| z.x[0] * z.x[0] + z.x[0] * z.v[0] + 1.0;
        let full = SolutionField::from_fn(grid, sym).unwrap();
        let half_grid = Grid { times: vec![0.0], x: Axis::spanning(-1.0, 0.0, 5), v: Axis::cell_centered(-1.0, 1.0, 4), periodic: false };
        let half = SolutionField::from_fn(half_grid, sym).unwrap();
        let c = FnCoefficients::<1>::constant(1.0, [0.0], 0.0).unwrap();
        let (ext, _) = mirror_extend(&half, c, &Domain::half_space([1.0], 0.0).unwrap()).unwrap();
        for (a, b) in ext.values().iter().zip(full.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn curved_domains_must_be_flattened() {
        let c = FnCoefficients::<1>::constant(1.0, [0.0], 0.0).unwrap();
        let dom = Domain::chart(crate::transform::Chart::quadratic(0.5, 1.0).unwrap(), true);
        assert!(matches!(mirror_extend(&field(), c, &dom), Err(Error::NotFlat)));
    }
}
