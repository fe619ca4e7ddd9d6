//! Left group convolution `(k ∗ f)(z) = ∫ k(ω) f(ω⁻¹ ∘ z) dω`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use super::{MollifierKernel, PhasePoint};
use crate::field::{Axis, Grid, PhaseField, SolutionField};
use crate::{Error, Result};

const MIN_CELLS: usize = 4;
const MAX_CELLS: usize = 24;

fn cells(width: f64, spacing: f64) -> usize {
    ((width / spacing).ceil() as usize).clamp(MIN_CELLS, MAX_CELLS)
}

/// Smooth `f` with the kernel on the largest sub-grid whose pullbacks stay
/// inside the stored slab.
///
/// Quadrature is the midpoint rule on the kernel's support box, with about
/// one cell per field grid spacing along each axis; weights are normalized
/// to sum to one so constants are reproduced exactly.
pub fn group_convolve(k: &MollifierKernel<1>, f: &SolutionField) -> Result<SolutionField> {
    let g = f.grid();
    let (lo, hi) = k.support_box();
    let mean_dt = g.cell_volume() / (g.x.step * g.v.step);
    let (nt, nx, nv) = (
        cells(hi.t - lo.t, mean_dt),
        cells(hi.x[0] - lo.x[0], g.x.step),
        cells(hi.v[0] - lo.v[0], g.v.step),
    );
    let (ht, hx, hv) = ((hi.t - lo.t) / nt as f64, (hi.x[0] - lo.x[0]) / nx as f64, (hi.v[0] - lo.v[0]) / nv as f64);
    let mut nodes: Vec<(PhasePoint<1>, f64)> = Vec::with_capacity(nt * nx * nv);
    for a in 0..nt {
        for b in 0..nx {
            for c in 0..nv {
                let w = PhasePoint::raw(
                    lo.t + (a as f64 + 0.5) * ht,
                    [lo.x[0] + (b as f64 + 0.5) * hx],
                    [lo.v[0] + (c as f64 + 0.5) * hv],
                );
                let weight = k.eval(&w);
                if weight > 0.0 {
                    nodes.push((w.inverse(), weight));
                }
            }
        }
    }
    let total: f64 = nodes.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut nodes {
        *w /= total;
    }

    // Time levels with t − ω_t inside the slab for every ω in the support.
    let (t0, t1) = g.t_range();
    let levels: Vec<usize> = (0..g.times.len())
        .filter(|&n| g.times[n] - hi.t >= t0 - 1e-12 && g.times[n] - lo.t <= t1 + 1e-12)
        .collect();
    if levels.is_empty() {
        return Err(Error::InsufficientPadding { axis: "t", required: hi.t - lo.t });
    }
    // x' = x − ω_x − (t − ω_t) ω_v is bilinear in (ω_t, ω_v): extremes at corners.
    let mut shift_lo = f64::INFINITY;
    let mut shift_hi = f64::NEG_INFINITY;
    for &n in [levels[0], levels[levels.len() - 1]].iter() {
        let t = g.times[n];
        for wt in [lo.t, hi.t] {
            for wv in [lo.v[0], hi.v[0]] {
                for wx in [lo.x[0], hi.x[0]] {
                    let s = wx + (t - wt) * wv;
                    shift_lo = shift_lo.min(s);
                    shift_hi = shift_hi.max(s);
                }
            }
        }
    }
    let keep = |axis: &Axis, from: f64, to: f64| -> Vec<usize> {
        (0..axis.len).filter(|&i| axis.node(i) >= from - 1e-12 && axis.node(i) <= to + 1e-12).collect()
    };
    let xs: Vec<usize> = if g.periodic {
        (0..g.x.len).collect()
    } else {
        keep(&g.x, g.x.start + shift_hi, g.x.end() + shift_lo)
    };
    if xs.is_empty() {
        return Err(Error::InsufficientPadding { axis: "x", required: shift_hi - shift_lo });
    }
    let (vlo, vhi) = g.v_range();
    let vs = keep(&g.v, vlo + hi.v[0], vhi + lo.v[0]);
    if vs.is_empty() {
        return Err(Error::InsufficientPadding { axis: "v", required: hi.v[0] - lo.v[0] });
    }

    let grid = Grid {
        times: levels.iter().map(|&n| g.times[n]).collect(),
        x: Axis::new(g.x.node(xs[0]), g.x.step, xs.len()),
        v: Axis::new(g.v.node(vs[0]), g.v.step, vs.len()),
        periodic: g.periodic,
    };
    let mut values = Vec::with_capacity(grid.size());
    for &n in &levels {
        for &i in &xs {
            for &j in &vs {
                let z = f.node(n, i, j);
                let mut acc = 0.0;
                for (w_inv, weight) in &nodes {
                    acc += weight * f.eval(&w_inv.compose(&z))?;
                }
                values.push(acc);
            }
        }
    }
    SolutionField::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galilean::{build_mollifier, Orientation};
    use alloc::vec;

    fn grid(n: usize) -> Grid {
        let times = (0..=n).map(|k| k as f64 / n as f64).collect();
        Grid { times, x: Axis::spanning(-1.0, 1.0, 2 * n + 1), v: Axis::cell_centered(-2.0, 2.0, 4 * n), periodic: false }
    }

    fn smooth(z: &PhasePoint<1>) -> f64 {
        (z.x[0] + 0.5 * z.v[0]).sin() * (0.7 * z.t).cos() + 0.3 * z.v[0] * z.v[0]
    }

    #[test]
    fn constants_are_preserved() {
        let f = SolutionField::from_fn(grid(10), |_| 2.5).unwrap();
        let k = build_mollifier(0.3, Orientation::INFLUX).unwrap();
        let out = group_convolve(&k, &f).unwrap();
        assert!(out.values().iter().all(|v| (v - 2.5).abs() < 1e-12));
        assert!(out.grid().times[0] >= 0.09 - 1e-12);
    }

    #[test]
    fn reports_missing_margin() {
        let f = SolutionField::from_fn(grid(4), |_| 1.0).unwrap();
        let k = build_mollifier(1.2, Orientation::INFLUX).unwrap();
        assert!(matches!(group_convolve(&k, &f), Err(Error::InsufficientPadding { .. })));
    }

    #[test]
    fn velocity_derivative_commutes() {
        // ∂v is left-invariant, so ∂v(k ∗ f) = k ∗ ∂v f up to grid error
        let k = build_mollifier(0.3, Orientation::CENTERED).unwrap();
        let mut errs = vec![];
        for n in [10usize, 20] {
            let g = grid(n);
            let f = SolutionField::from_fn(g.clone(), smooth).unwrap();
            let dvf = SolutionField::from_fn(g, |z| {
                0.5 * (z.x[0] + 0.5 * z.v[0]).cos() * (0.7 * z.t).cos() + 0.6 * z.v[0]
            })
            .unwrap();
            let kf = group_convolve(&k, &f).unwrap();
            let kdvf = group_convolve(&k, &dvf).unwrap();
            let gr = kf.grid();
            let h = gr.v.step;
            let mut err: f64 = 0.0;
            for nn in 0..gr.times.len() {
                for i in 0..gr.x.len {
                    for j in 1..gr.v.len - 1 {
                        let d = (kf.value(nn, i, j + 1) - kf.value(nn, i, j - 1)) / (2.0 * h);
                        err = err.max((d - kdvf.value(nn, i, j)).abs());
                    }
                }
            }
            errs.push((h, err));
        }
        assert!(errs[0].1 < 0.1, "{errs:?}");
        assert!(errs[1].1 < 0.75 * errs[0].1, "{errs:?}");
    }

    #[test]
    fn converges_as_scale_shrinks() {
        let f = SolutionField::from_fn(grid(20), smooth).unwrap();
        let mut last = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05] {
            let k = build_mollifier(eps, Orientation::INFLUX).unwrap();
            let out = group_convolve(&k, &f).unwrap();
            let mut err: f64 = 0.0;
            for (idx, &val) in out.values().iter().enumerate() {
                let g = out.grid();
                let j = idx % g.v.len;
                let i = (idx / g.v.len) % g.x.len;
                let n = idx / (g.v.len * g.x.len);
                let z = out.node(n, i, j);
                let _ = g;
                err = err.max((val - f.eval(&z).unwrap()).abs());
            }
            assert!(err < last, "eps {eps}: {err} !< {last}");
            last = err;
        }
    }
}
