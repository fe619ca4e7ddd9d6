//! Gridded phase-space fields in one spatial dimension.
//!
//! Storage is `values[(n * nx + i) * nv + j]` for time level `n`, position
//! node `i` and velocity node `j`. Evaluation is bilinear in `(x, v)` and
//! linear between the two bracketing time levels. Velocity queries up to
//! half a cell beyond the outer nodes are clamped (cell-centred velocity
//! grids end at a zero-flux face).

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::galilean::PhasePoint;
use crate::{Error, Result};

/// `a mod p` in `[0, p)`.
pub(crate) fn wrap(a: f64, p: f64) -> f64 {
    let m = a % p;
    if m < 0.0 {
        m + p
    } else {
        m
    }
}

/// A uniform axis `start + k·step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, len: usize) -> Self {
        Self { start, step, len }
    }

    /// `len` nodes from `lo` to `hi` inclusive.
    pub fn spanning(lo: f64, hi: f64, len: usize) -> Self {
        Self { start: lo, step: (hi - lo) / (len - 1) as f64, len }
    }

    /// `len` cell centres of a uniform partition of `[lo, hi]`.
    pub fn cell_centered(lo: f64, hi: f64, len: usize) -> Self {
        let step = (hi - lo) / len as f64;
        Self { start: lo + 0.5 * step, step, len }
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    #[inline]
    pub fn end(&self) -> f64 {
        self.node(self.len - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.node(k))
    }

    /// Bracketing index and weight for `s` inside `[start, end]`.
    #[inline]
    fn bracket(&self, s: f64) -> (usize, f64) {
        if self.len == 1 {
            return (0, 0.0);
        }
        let u = (s - self.start) / self.step;
        let k = (u.floor().max(0.0) as usize).min(self.len - 2);
        (k, (u - k as f64).clamp(0.0, 1.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub times: Vec<f64>,
    pub x: Axis,
    pub v: Axis,
    /// Periodic in `x` with period `x.len · x.step`.
    pub periodic: bool,
}

impl Grid {
    pub fn size(&self) -> usize {
        self.times.len() * self.x.len * self.v.len
    }

    #[inline]
    pub fn index(&self, n: usize, i: usize, j: usize) -> usize {
        (n * self.x.len + i) * self.v.len + j
    }

    /// Volume of one `(t, x, v)` cell, using the mean time spacing.
    pub fn cell_volume(&self) -> f64 {
        let dt = if self.times.len() > 1 {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        } else {
            1.0
        };
        dt * self.x.step * self.v.step
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    pub fn x_range(&self) -> (f64, f64) {
        if self.periodic {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (self.x.start, self.x.end())
        }
    }

    /// Velocity range including the clamped half cells.
    pub fn v_range(&self) -> (f64, f64) {
        (self.v.start - 0.5 * self.v.step, self.v.end() + 0.5 * self.v.step)
    }

    fn time_bracket(&self, t: f64) -> Option<(usize, f64)> {
        let (lo, hi) = self.t_range();
        let slack = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
        if t < lo - slack || t > hi + slack {
            return None;
        }
        if self.times.len() == 1 {
            return Some((0, 0.0));
        }
        let k = self.times.partition_point(|&s| s <= t).clamp(1, self.times.len() - 1) - 1;
        let w = ((t - self.times[k]) / (self.times[k + 1] - self.times[k])).clamp(0.0, 1.0);
        Some((k, w))
    }
}

/// Anything that can be evaluated pointwise on one-dimensional phase space.
pub trait PhaseField: Sync {
    fn eval(&self, z: &PhasePoint<1>) -> Result<f64>;

    /// Stored grid nodes inside the box `[lo, hi]`, with their values.
    fn nodes_in(&self, _lo: &PhasePoint<1>, _hi: &PhasePoint<1>) -> Vec<(PhasePoint<1>, f64)> {
        Vec::new()
    }

    /// Extents of the stored slab, if the field is gridded.
    fn grid(&self) -> Option<&Grid> {
        None
    }
}

/// A closed-form field.
#[derive(Clone, Copy)]
pub struct FnField<F>(pub F);

impl<F: Fn(&PhasePoint<1>) -> f64 + Sync> PhaseField for FnField<F> {
    fn eval(&self, z: &PhasePoint<1>) -> Result<f64> {
        Ok((self.0)(z))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    grid: Grid,
    values: Vec<f64>,
}

impl SolutionField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::Usage("value count does not match grid size"));
        }
        if grid.times.is_empty() || grid.x.len < 2 || grid.v.len < 2 {
            return Err(Error::Usage("grid needs one time level and two nodes per phase axis"));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { what: "field value" });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&PhasePoint<1>) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.size());
        for &t in &grid.times {
            for x in grid.x.nodes() {
                for v in grid.v.nodes() {
                    values.push(f(&PhasePoint::raw(t, [x], [v])));
                }
            }
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, n: usize, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(n, i, j)]
    }

    /// The `nx · nv` values of time level `n`, row-major in `(x, v)`.
    pub fn level(&self, n: usize) -> &[f64] {
        let m = self.grid.x.len * self.grid.v.len;
        &self.values[n * m..(n + 1) * m]
    }

    pub fn node(&self, n: usize, i: usize, j: usize) -> PhasePoint<1> {
        PhasePoint::raw(self.grid.times[n], [self.grid.x.node(i)], [self.grid.v.node(j)])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Bilinear interpolation within level `n`.
    fn eval_level(&self, n: usize, x: f64, v: f64) -> f64 {
        let g = &self.grid;
        let (i0, i1, wx) = if g.periodic {
            let period = g.x.step * g.x.len as f64;
            let u = crate::field::wrap(x - g.x.start, period) / g.x.step;
            let i = (u.floor() as usize).min(g.x.len - 1);
            (i, (i + 1) % g.x.len, (u - i as f64).clamp(0.0, 1.0))
        } else {
            let (i, w) = g.x.bracket(x);
            (i, i + 1, w)
        };
        let (j, wv) = g.v.bracket(v.clamp(g.v.start, g.v.end()));
        let f00 = self.value(n, i0, j);
        let f01 = self.value(n, i0, j + 1);
        let f10 = self.value(n, i1, j);
        let f11 = self.value(n, i1, j + 1);
        let a = f00 + (f01 - f00) * wv;
        let b = f10 + (f11 - f10) * wv;
        a + (b - a) * wx
    }
}

impl PhaseField for SolutionField {
    fn eval(&self, z: &PhasePoint<1>) -> Result<f64> {
        let g = &self.grid;
        let (x, v) = (z.x[0], z.v[0]);
        let (tlo, thi) = g.t_range();
        let Some((n, wt)) = g.time_bracket(z.t) else {
            return Err(Error::OutsideSlab { axis: "t", lo: tlo, hi: thi });
        };
        let (xlo, xhi) = g.x_range();
        let xs = 1e-12 * (1.0 + xlo.abs().max(xhi.abs()));
        if !g.periodic && (x < xlo - xs || x > xhi + xs) {
            return Err(Error::OutsideSlab { axis: "x", lo: xlo, hi: xhi });
        }
        let (vlo, vhi) = g.v_range();
        if v < vlo - 1e-12 || v > vhi + 1e-12 {
            return Err(Error::OutsideSlab { axis: "v", lo: vlo, hi: vhi });
        }
        let a = self.eval_level(n, x, v);
        if wt == 0.0 || g.times.len() == 1 {
            return Ok(a);
        }
        let b = self.eval_level(n + 1, x, v);
        Ok(a + (b - a) * wt)
    }

    fn nodes_in(&self, lo: &PhasePoint<1>, hi: &PhasePoint<1>) -> Vec<(PhasePoint<1>, f64)> {
        let g = &self.grid;
        let span = |a: &crate::field::Axis, l: f64, h: f64| -> (usize, usize) {
            let first = ((l - a.start) / a.step).ceil().max(0.0) as usize;
            let last = ((h - a.start) / a.step).floor();
            if last < 0.0 {
                return (1, 0);
            }
            (first, (last as usize).min(a.len - 1))
        };
        let (i0, i1) = if g.periodic { (0, g.x.len - 1) } else { span(&g.x, lo.x[0], hi.x[0]) };
        let (j0, j1) = span(&g.v, lo.v[0], hi.v[0]);
        let mut out = Vec::new();
        for (n, &t) in g.times.iter().enumerate() {
            if t < lo.t || t > hi.t {
                continue;
            }
            for i in i0..=i1.min(g.x.len - 1) {
                if i0 > i1 {
                    break;
                }
                for j in j0..=j1.min(g.v.len - 1) {
                    if j0 > j1 {
                        break;
                    }
                    out.push((self.node(n, i, j), self.value(n, i, j)));
                }
            }
        }
        out
    }

    fn grid(&self) -> Option<&Grid> {
        Some(&self.grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid() -> Grid {
        Grid { times: vec![0.0, 0.5, 1.0], x: Axis::spanning(-1.0, 0.0, 11), v: Axis::cell_centered(-2.0, 2.0, 8), periodic: false }
    }

    #[test]
    fn reproduces_trilinear_functions() {
        let f = |z: &PhasePoint<1>| 1.0 + 2.0 * z.t - 3.0 * z.x[0] + 0.5 * z.v[0];
        let field = SolutionField::from_fn(grid(), f).unwrap();
        for z in [PhasePoint::raw(0.3, [-0.37], [0.11]), PhasePoint::raw(1.0, [0.0], [-1.7]), PhasePoint::raw(0.0, [-1.0], [1.75])] {
            assert!((field.eval(&z).unwrap() - f(&z)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_points_outside_the_slab() {
        let field = SolutionField::from_fn(grid(), |_| 1.0).unwrap();
        assert!(matches!(field.eval(&PhasePoint::raw(1.5, [-0.5], [0.0])), Err(Error::OutsideSlab { axis: "t", .. })));
        assert!(matches!(field.eval(&PhasePoint::raw(0.5, [0.5], [0.0])), Err(Error::OutsideSlab { axis: "x", .. })));
        assert!(matches!(field.eval(&PhasePoint::raw(0.5, [-0.5], [2.5])), Err(Error::OutsideSlab { axis: "v", .. })));
        // half a velocity cell beyond the last node is clamped
        assert_eq!(field.eval(&PhasePoint::raw(0.5, [-0.5], [1.99])).unwrap(), 1.0);
    }

    #[test]
    fn periodic_wraps() {
        let mut g = grid();
        g.periodic = true;
        g.x = Axis::new(0.0, 0.25, 4);
        let field = SolutionField::from_fn(g, |z| (core::f64::consts::TAU * z.x[0]).sin()).unwrap();
        let a = field.eval(&PhasePoint::raw(0.2, [0.1], [0.0])).unwrap();
        let b = field.eval(&PhasePoint::raw(0.2, [3.1], [0.0])).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn nodes_in_box() {
        let field = SolutionField::from_fn(grid(), |_| 0.0).unwrap();
        let lo = PhasePoint::raw(0.4, [-0.25], [-0.5]);
        let hi = PhasePoint::raw(1.0, [0.0], [0.5]);
        let nodes = field.nodes_in(&lo, &hi);
        // two time levels, x nodes -0.2..0 (3), v centres -0.25, 0.25 (2)
        assert_eq!(nodes.len(), 2 * 3 * 2);
    }
}
