//! Split-step solver for the one-dimensional equation
//!
//! ```text
//! ∂t f + v ∂x f = ∂v(a ∂v f) − b ∂v f + G,   x ∈ (x_L, x_R), |v| < V.
//! ```
//!
//! Each step applies backward-Euler velocity diffusion (conservative flux
//! form, harmonic-mean face coefficients, upwind drift, zero flux at
//! `|v| = V`) followed by semi-Lagrangian transport along `x − v Δt`.
//! Characteristics that leave through `γ₋` pick up the influx datum at
//! their entry time; with specular reflection at `x_R` they are reflected
//! to `(2x_R − x, −v)`. Ending each step with transport makes incoming
//! boundary nodes equal `g` exactly.
//!
//! Position nodes include both ends (`periodic` drops the duplicate right
//! end); velocities are cell centres `v_j = −V + (j + ½)Δv`.

mod manufactured;
mod rough;
mod tridiagonal;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::field::{Axis, Grid, SolutionField};
use crate::galilean::PhasePoint;
use crate::transform::CoefficientField;
use crate::{Error, Result};

pub use manufactured::{manufactured_source, ExactSolution};
pub use rough::{sample_rough_coefficients, CellPartition, RoughDiffusion};
pub use tridiagonal::solve_tridiagonal;

/// Boundary datum or initial datum as a function of `(t, x, v)`.
pub type DataFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// `f = g` on the incoming part of both ends.
    Influx,
    /// Specular reflection at `x_R`, influx at `x_L`.
    Specular,
    /// Periodic in `x`; no boundary.
    Periodic,
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub x_left: f64,
    pub x_right: f64,
    pub velocity_bound: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub nx: usize,
    pub nv: usize,
    pub dt: f64,
    pub coefficients: Arc<dyn CoefficientField<1>>,
    pub influx: DataFn,
    pub initial: DataFn,
    pub boundary: BoundaryMode,
    /// Keep every `store_every`-th time level (the last level is always kept).
    pub store_every: usize,
}

impl ProblemSpec {
    /// Half-line benchmark defaults: `Ω = (x_left, 0)`, zero data, influx.
    pub fn new(x_left: f64, velocity_bound: f64, coefficients: Arc<dyn CoefficientField<1>>) -> Self {
        Self {
            x_left,
            x_right: 0.0,
            velocity_bound,
            t_start: 0.0,
            t_end: 1.0,
            nx: 65,
            nv: 64,
            dt: 1e-2,
            coefficients,
            influx: Arc::new(|_, _, _| 0.0),
            initial: Arc::new(|_, _, _| 0.0),
            boundary: BoundaryMode::Influx,
            store_every: 1,
        }
    }

    pub fn x_axis(&self) -> Axis {
        if self.boundary == BoundaryMode::Periodic {
            Axis::new(self.x_left, (self.x_right - self.x_left) / self.nx as f64, self.nx)
        } else {
            Axis::spanning(self.x_left, self.x_right, self.nx)
        }
    }

    pub fn v_axis(&self) -> Axis {
        Axis::cell_centered(-self.velocity_bound, self.velocity_bound, self.nv)
    }

    /// Number of steps and the uniform step actually used.
    pub fn steps(&self) -> (usize, f64) {
        let span = self.t_end - self.t_start;
        let n = ((span / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (n, span / n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_left, self.x_right, self.velocity_bound, self.t_start, self.t_end, self.dt];
        if !finite.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { what: "problem parameter" });
        }
        if !(self.x_right > self.x_left) {
            return Err(Error::Usage("need x_left < x_right"));
        }
        if !(self.velocity_bound > 0.0) {
            return Err(Error::NonPositive { what: "velocity bound", value: self.velocity_bound });
        }
        if !(self.t_end > self.t_start) {
            return Err(Error::Usage("need t_start < t_end"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::NonPositive { what: "time step", value: self.dt });
        }
        if self.nx < 3 || self.nv < 2 {
            return Err(Error::Usage("grid needs nx ≥ 3 and nv ≥ 2"));
        }
        if self.store_every == 0 {
            return Err(Error::Usage("store_every must be positive"));
        }
        let (_, dt) = self.steps();
        let limit = self.x_axis().step / self.velocity_bound;
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::Stability { bound: "dt ≤ dx / V", dt, limit });
        }
        Ok(())
    }
}

struct Stepper<'a> {
    p: &'a ProblemSpec,
    x: Axis,
    v: Axis,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    scratch_c: Vec<f64>,
    scratch_d: Vec<f64>,
    a: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(p: &'a ProblemSpec) -> Self {
        let nv = p.nv;
        Self {
            p,
            x: p.x_axis(),
            v: p.v_axis(),
            lower: vec![0.0; nv],
            diag: vec![0.0; nv],
            upper: vec![0.0; nv],
            rhs: vec![0.0; nv],
            scratch_c: Vec::with_capacity(nv),
            scratch_d: Vec::with_capacity(nv),
            a: vec![0.0; nv],
        }
    }

    /// Backward-Euler velocity diffusion of every position line, in place.
    fn diffuse(&mut self, f: &mut [f64], t_new: f64, dt: f64) -> Result<()> {
        let nv = self.v.len;
        let h = self.v.step;
        let coef = dt / (h * h);
        for i in 0..self.x.len {
            let xi = self.x.node(i);
            let line = &mut f[i * nv..(i + 1) * nv];
            for j in 0..nv {
                let s = self.p.coefficients.sample(&PhasePoint::raw(t_new, [xi], [self.v.node(j)]))?;
                self.a[j] = s.a[(0, 0)];
                self.lower[j] = 0.0;
                self.upper[j] = 0.0;
                self.diag[j] = 1.0;
                self.rhs[j] = line[j] + dt * s.g;
                // upwind drift b ∂v f
                let b = s.b[0];
                if b > 0.0 && j > 0 {
                    self.diag[j] += dt * b / h;
                    self.lower[j] -= dt * b / h;
                } else if b < 0.0 && j + 1 < nv {
                    self.diag[j] -= dt * b / h;
                    self.upper[j] += dt * b / h;
                }
            }
            for j in 0..nv - 1 {
                let (al, ar) = (self.a[j], self.a[j + 1]);
                let face = 2.0 * al * ar / (al + ar);
                let w = coef * face;
                self.diag[j] += w;
                self.upper[j] -= w;
                self.diag[j + 1] += w;
                self.lower[j + 1] -= w;
            }
            tridiagonal::thomas(&self.lower, &self.diag, &self.upper, &self.rhs, &mut self.scratch_c, &mut self.scratch_d, line)?;
        }
        Ok(())
    }

    /// Linear interpolation in `x` of velocity column `j`.
    fn interp(&self, f: &[f64], xq: f64, j: usize) -> f64 {
        let nv = self.v.len;
        let n = self.x.len;
        if self.p.boundary == BoundaryMode::Periodic {
            let period = self.x.step * n as f64;
            let u = crate::field::wrap(xq - self.x.start, period) / self.x.step;
            let i = (u.floor() as usize).min(n - 1);
            let w = u - i as f64;
            let k = (i + 1) % n;
            return f[i * nv + j] * (1.0 - w) + f[k * nv + j] * w;
        }
        let u = ((xq - self.x.start) / self.x.step).clamp(0.0, (n - 1) as f64);
        let i = (u.floor() as usize).min(n - 2);
        let w = u - i as f64;
        f[i * nv + j] * (1.0 - w) + f[(i + 1) * nv + j] * w
    }

    /// Semi-Lagrangian transport from `src` into `dst`.
    fn transport(&self, src: &[f64], dst: &mut [f64], t_new: f64, dt: f64) {
        let nv = self.v.len;
        let (xl, xr) = (self.x.start, self.x.end());
        let g = &self.p.influx;
        for i in 0..self.x.len {
            let xi = self.x.node(i);
            for j in 0..nv {
                let vj = self.v.node(j);
                let foot = xi - vj * dt;
                let val = if self.p.boundary == BoundaryMode::Periodic || (foot >= xl && foot <= xr) {
                    self.interp(src, foot, j)
                } else if foot > xr {
                    match self.p.boundary {
                        BoundaryMode::Specular => self.interp(src, 2.0 * xr - foot, nv - 1 - j),
                        _ => g(t_new - (xr - xi) / -vj, xr, vj),
                    }
                } else {
                    g(t_new - (xi - xl) / vj, xl, vj)
                };
                dst[i * nv + j] = val;
            }
        }
    }

    /// Impose `g` at incoming nodes of the initial level.
    fn impose_influx(&self, f: &mut [f64], t: f64) {
        if self.p.boundary == BoundaryMode::Periodic {
            return;
        }
        let nv = self.v.len;
        let last = self.x.len - 1;
        for j in 0..nv {
            let vj = self.v.node(j);
            if vj > 0.0 {
                f[j] = (self.p.influx)(t, self.x.start, vj);
            } else if vj < 0.0 && self.p.boundary == BoundaryMode::Influx {
                f[last * nv + j] = (self.p.influx)(t, self.x.end(), vj);
            }
        }
    }
}

/// March the problem from `t_start` to `t_end`.
pub fn solve(p: &ProblemSpec) -> Result<SolutionField> {
    p.validate()?;
    let (steps, dt) = p.steps();
    let mut st = Stepper::new(p);
    let (nx, nv) = (st.x.len, st.v.len);
    let mut cur = Vec::with_capacity(nx * nv);
    for i in 0..nx {
        for j in 0..nv {
            cur.push((p.initial)(p.t_start, st.x.node(i), st.v.node(j)));
        }
    }
    st.impose_influx(&mut cur, p.t_start);
    let mut next = vec![0.0; nx * nv];
    let mut times = vec![p.t_start];
    let mut values = cur.clone();
    for n in 1..=steps {
        let t_new = p.t_start + dt * n as f64;
        st.diffuse(&mut cur, t_new, dt)?;
        st.transport(&cur, &mut next, t_new, dt);
        core::mem::swap(&mut cur, &mut next);
        if !cur.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteValue { step: n });
        }
        if n % p.store_every == 0 || n == steps {
            times.push(t_new);
            values.extend_from_slice(&cur);
        }
    }
    let grid = Grid { times, x: st.x, v: st.v, periodic: p.boundary == BoundaryMode::Periodic };
    SolutionField::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::FnCoefficients;

    fn unit(source: f64) -> Arc<dyn CoefficientField<1>> {
        Arc::new(FnCoefficients::constant(1.0, [0.0], source).unwrap())
    }

    #[test]
    fn constants_are_preserved() {
        let mut p = ProblemSpec::new(-1.0, 3.0, unit(0.0));
        p.influx = Arc::new(|_, _, _| 0.7);
        p.initial = Arc::new(|_, _, _| 0.7);
        p.nx = 33;
        p.nv = 24;
        p.dt = 0.01;
        p.t_end = 0.5;
        let f = solve(&p).unwrap();
        assert!(f.values().iter().all(|v| (v - 0.7).abs() <= 1e-12));
    }

    #[test]
    fn incoming_nodes_carry_the_datum() {
        let mut p = ProblemSpec::new(-1.0, 3.0, unit(1.0));
        p.influx = Arc::new(|t, x, v| 1.0 + t + x * v);
        p.initial = Arc::new(|_, _, v| v.sin());
        p.nx = 33;
        p.nv = 24;
        p.dt = 0.01;
        p.t_end = 0.3;
        let f = solve(&p).unwrap();
        let g = f.grid();
        for n in 0..g.times.len() {
            for j in 0..g.v.len {
                let v = g.v.node(j);
                let t = g.times[n];
                if v < 0.0 {
                    assert!((f.value(n, g.x.len - 1, j) - (1.0 + t)).abs() <= 1e-12);
                } else {
                    assert!((f.value(n, 0, j) - (1.0 + t - v)).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn refuses_unstable_steps() {
        let mut p = ProblemSpec::new(-1.0, 4.0, unit(0.0));
        p.nx = 101;
        p.dt = 0.1;
        assert!(matches!(solve(&p), Err(Error::Stability { .. })));
    }

    #[test]
    fn maximum_principle() {
        let mut p = ProblemSpec::new(-1.0, 3.0, unit(0.0));
        p.influx = Arc::new(|t, _, v| 0.5 + 0.4 * (3.0 * t + v).sin());
        p.initial = Arc::new(|_, x, v| 0.5 + 0.3 * (5.0 * x).cos() * v.cos());
        p.nx = 41;
        p.nv = 32;
        p.dt = 0.005;
        p.t_end = 0.4;
        let f = solve(&p).unwrap();
        assert!(f.values().iter().all(|&v| (0.1 - 1e-12..=0.9 + 1e-12).contains(&v)));
    }

    #[test]
    fn deterministic() {
        let mut p = ProblemSpec::new(-1.0, 3.0, unit(1.0));
        p.initial = Arc::new(|_, x, v| x * v);
        p.nx = 21;
        p.nv = 16;
        p.dt = 0.01;
        p.t_end = 0.2;
        assert_eq!(solve(&p).unwrap(), solve(&p).unwrap());
    }
}
