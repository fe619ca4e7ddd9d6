//! The ratio `sup_{H_{1/2}} f₊ / (‖f₊‖_{L²(H₁)} + ‖G‖_{L∞(H₁)})` on grid nodes.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::field::{Axis, Grid, PhaseField, SolutionField};
use crate::galilean::PhasePoint;
use crate::geometry::{Domain, KineticCylinder, BOUNDARY_TOL};
use crate::transform::{CoefficientField, CoefficientSample, Ellipticity};
use crate::{Error, Result};

/// Components of the ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinftyRatio {
    pub ratio: f64,
    pub sup_half: f64,
    pub l2: f64,
    pub g_sup: f64,
}

/// Node-based ratio over `Q_r(z⁰) ∩ {x ∈ Ω̄}`; cell volumes weight the `L²` sum.
pub fn linfty_ratio<C: CoefficientField<1> + ?Sized>(
    f: &SolutionField,
    c: &C,
    dom: &Domain<1>,
    z0: &PhasePoint<1>,
) -> Result<LinftyRatio> {
    let g = f.grid();
    let outer = KineticCylinder::new(*z0, 1.0)?;
    let inner = KineticCylinder::new(*z0, 0.5)?;
    let (lo, hi) = outer.bounding_box();
    let (t0, t1) = g.t_range();
    if lo.t < t0 - 1e-12 || hi.t > t1 + 1e-12 {
        return Err(Error::OutsideSlab { axis: "t", lo: lo.t, hi: hi.t });
    }
    let (vlo, vhi) = g.v_range();
    if lo.v[0] < vlo || hi.v[0] > vhi {
        return Err(Error::OutsideSlab { axis: "v", lo: lo.v[0], hi: hi.v[0] });
    }
    if !g.periodic && lo.x[0] < g.x.start - 1e-12 {
        return Err(Error::OutsideSlab { axis: "x", lo: lo.x[0], hi: hi.x[0] });
    }
    if !g.periodic && matches!(dom, Domain::Whole) && hi.x[0] > g.x.end() + 1e-12 {
        return Err(Error::OutsideSlab { axis: "x", lo: lo.x[0], hi: hi.x[0] });
    }
    let vol = g.cell_volume();
    let (mut sup_half, mut l2, mut g_sup) = (0.0f64, 0.0f64, 0.0f64);
    for (z, val) in f.nodes_in(&lo, &hi) {
        if !outer.contains(&z) || dom.locate(&z.x)?.0 > BOUNDARY_TOL {
            continue;
        }
        let pos = val.max(0.0);
        l2 += pos * pos * vol;
        g_sup = g_sup.max(c.sample(&z)?.g.abs());
        if inner.contains(&z) {
            sup_half = sup_half.max(pos);
        }
    }
    let l2 = l2.sqrt();
    let denom = l2 + g_sup;
    let ratio = if denom > 0.0 { sup_half / denom } else { 0.0 };
    Ok(LinftyRatio { ratio, sup_half, l2, g_sup })
}

/// Source set to zero beyond the plane `x = wall`.
pub struct ZeroOutside<C> {
    inner: C,
    wall: f64,
}

impl<C: CoefficientField<1>> CoefficientField<1> for ZeroOutside<C> {
    fn sample(&self, z: &PhasePoint<1>) -> Result<CoefficientSample<1>> {
        let mut s = self.inner.sample(z)?;
        if z.x[0] > self.wall {
            s.g = 0.0;
        }
        Ok(s)
    }

    fn ellipticity(&self) -> Ellipticity {
        self.inner.ellipticity()
    }
}

/// Extend a field on `x ≤ x_R` by zero to `extra` further nodes, together
/// with its source.
pub fn extend_by_zero<C: CoefficientField<1>>(
    f: &SolutionField,
    c: C,
    extra: usize,
) -> Result<(SolutionField, Arc<ZeroOutside<C>>)> {
    let g = f.grid();
    if g.periodic {
        return Err(Error::Usage("periodic fields have no exterior"));
    }
    let (nx, nv) = (g.x.len, g.v.len);
    let grid = Grid { times: g.times.clone(), x: Axis::new(g.x.start, g.x.step, nx + extra), v: g.v, periodic: false };
    let mut values = Vec::with_capacity(grid.size());
    for n in 0..g.times.len() {
        values.extend_from_slice(f.level(n));
        values.extend(core::iter::repeat_n(0.0, extra * nv));
    }
    let wall = g.x.end();
    Ok((SolutionField::new(grid, values)?, Arc::new(ZeroOutside { inner: c, wall })))
}
