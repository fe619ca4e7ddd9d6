//! Residual of the weak formulation
//!
//! ```text
//! ∫_D (−f (∂t + v ∂x) φ + a ∂v f ∂v φ + b ∂v f φ − G φ) + ∫_{γ₋} g φ (v·n) dγ = 0
//! ```
//!
//! for separable polynomial bumps `φ`, evaluated by quadrature on the
//! solution grid: trapezoid in `t` and `x`, midpoint in `v`, velocity
//! derivatives of `f` by differences (faces for the diffusion term).


use crate::field::SolutionField;
use crate::galilean::PhasePoint;
use crate::solver::{BoundaryMode, ProblemSpec};
use crate::{Error, Result};

/// `φ(t, x, v) = B((t − t_c)/h_t) B((x − x_c)/h_x) B((v − v_c)/h_v)` with
/// `B(s) = (1 − s²)²` on `|s| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub center: [f64; 3],
    pub half_width: [f64; 3],
}

#[inline]
fn bump(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        (0.0, 0.0)
    } else {
        let q = 1.0 - s * s;
        (q * q, -4.0 * s * q)
    }
}

/// `∫_{−1}^{1} (1 − s²)² ds`.
pub const BUMP_MASS: f64 = 16.0 / 15.0;

impl TestFunction {
    pub fn new(center: [f64; 3], half_width: [f64; 3]) -> Result<Self> {
        for &h in &half_width {
            if !(h > 0.0) {
                return Err(Error::NonPositive { what: "test function half-width", value: h });
            }
        }
        Ok(Self { center, half_width })
    }

    /// `(φ, ∂t φ, ∂x φ, ∂v φ)` at a point.
    pub fn eval(&self, t: f64, x: f64, v: f64) -> [f64; 4] {
        let [ht, hx, hv] = self.half_width;
        let (bt, dbt) = bump((t - self.center[0]) / ht);
        let (bx, dbx) = bump((x - self.center[1]) / hx);
        let (bv, dbv) = bump((v - self.center[2]) / hv);
        [bt * bx * bv, dbt / ht * bx * bv, bt * dbx / hx * bv, bt * bx * dbv / hv]
    }

    /// `∫∫ φ(t, x_b, v) v dv dt` over all `t`, `v` (closed form).
    pub fn boundary_moment(&self, x_b: f64) -> f64 {
        let (bx, _) = bump((x_b - self.center[1]) / self.half_width[1]);
        self.half_width[0] * BUMP_MASS * bx * self.half_width[2] * BUMP_MASS * self.center[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidual {
    /// Absolute value of the discrete identity.
    pub value: f64,
    /// Signed interior part and boundary part, for diagnostics.
    pub interior: f64,
    pub boundary: f64,
    /// At least four grid cells per half-width along every axis.
    pub resolved: bool,
    /// The support reaches `γ₊`, whose term is not part of the identity.
    pub touches_outgoing: bool,
}

pub fn weak_residual(f: &SolutionField, phi: &TestFunction, p: &ProblemSpec) -> Result<WeakResidual> {
    let g = f.grid();
    let nt = g.times.len();
    if nt < 2 {
        return Err(Error::Usage("weak residual needs at least two time levels"));
    }
    let (nx, nv) = (g.x.len, g.v.len);
    let (hx, hv) = (g.x.step, g.v.step);
    let periodic = g.periodic;
    let tw = |n: usize| -> f64 {
        let left = if n > 0 { g.times[n] - g.times[n - 1] } else { 0.0 };
        let right = if n + 1 < nt { g.times[n + 1] - g.times[n] } else { 0.0 };
        0.5 * (left + right)
    };
    let xw = |i: usize| if !periodic && (i == 0 || i == nx - 1) { 0.5 * hx } else { hx };
    let mean_dt = (g.times[nt - 1] - g.times[0]) / (nt - 1) as f64;
    let resolved = phi.half_width[0] >= 4.0 * mean_dt && phi.half_width[1] >= 4.0 * hx && phi.half_width[2] >= 4.0 * hv;

    let mut interior = 0.0;
    let mut a = alloc::vec![0.0; nv];
    for n in 0..nt {
        let t = g.times[n];
        let wt = tw(n);
        if wt == 0.0 || (t - phi.center[0]).abs() >= phi.half_width[0] {
            continue;
        }
        for i in 0..nx {
            let x = g.x.node(i);
            if (x - phi.center[1]).abs() >= phi.half_width[1] {
                continue;
            }
            let w = wt * xw(i);
            for j in 0..nv {
                let v = g.v.node(j);
                let s = p.coefficients.sample(&PhasePoint::raw(t, [x], [v]))?;
                a[j] = s.a[(0, 0)];
                let [ph, pt, px, _] = phi.eval(t, x, v);
                if ph == 0.0 && pt == 0.0 && px == 0.0 {
                    continue;
                }
                let fv = f.value(n, i, j);
                let dvf = if j == 0 {
                    (f.value(n, i, 1) - fv) / hv
                } else if j == nv - 1 {
                    (fv - f.value(n, i, j - 1)) / hv
                } else {
                    (f.value(n, i, j + 1) - f.value(n, i, j - 1)) / (2.0 * hv)
                };
                interior += w * hv * (-fv * (pt + v * px) + s.b[0] * dvf * ph - s.g * ph);
            }
            for j in 0..nv - 1 {
                let vf = 0.5 * (g.v.node(j) + g.v.node(j + 1));
                let dphi = phi.eval(t, x, vf)[3];
                if dphi == 0.0 {
                    continue;
                }
                let face = 2.0 * a[j] * a[j + 1] / (a[j] + a[j + 1]);
                interior += w * face * (f.value(n, i, j + 1) - f.value(n, i, j)) * dphi;
            }
        }
    }

    let mut boundary = 0.0;
    let mut touches_outgoing = false;
    if !periodic {
        // (x_b, outward normal)
        let mut ends = [(g.x.end(), 1.0), (g.x.start, -1.0)];
        if p.boundary == BoundaryMode::Specular {
            ends[0].1 = 0.0;
        }
        for (xb, normal) in ends {
            if (xb - phi.center[1]).abs() >= phi.half_width[1] {
                continue;
            }
            for n in 0..nt {
                let t = g.times[n];
                for j in 0..nv {
                    let v = g.v.node(j);
                    let ph = phi.eval(t, xb, v)[0];
                    let vn = v * normal;
                    if ph == 0.0 {
                        continue;
                    }
                    if vn < 0.0 {
                        boundary += tw(n) * hv * (p.influx)(t, xb, v) * ph * vn;
                    } else if vn > 0.0 {
                        touches_outgoing = true;
                    }
                }
            }
        }
    }
    Ok(WeakResidual { value: (interior + boundary).abs(), interior, boundary, resolved, touches_outgoing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve;
    use crate::transform::FnCoefficients;
    use alloc::sync::Arc;

    fn constant_problem() -> ProblemSpec {
        let mut p = ProblemSpec::new(-1.0, 3.0, Arc::new(FnCoefficients::constant(1.0, [0.0], 0.0).unwrap()));
        p.influx = Arc::new(|_, _, _| 2.0);
        p.initial = Arc::new(|_, _, _| 2.0);
        p.nx = 41;
        p.nv = 48;
        p.dt = 0.0075;
        p.t_end = 0.6;
        p
    }

    #[test]
    fn constant_solution_interior_bump() {
        let p = constant_problem();
        let f = solve(&p).unwrap();
        let phi = TestFunction::new([0.3, -0.5, 0.2], [0.2, 0.3, 1.0]).unwrap();
        let r = weak_residual(&f, &phi, &p).unwrap();
        assert!(r.resolved && !r.touches_outgoing);
        assert!(r.value < 1e-12, "{r:?}");
    }

    #[test]
    fn perturbed_datum_is_detected() {
        let p = constant_problem();
        let f = solve(&p).unwrap();
        // support touches γ₋ at x = 0 with v < 0 only
        let phi = TestFunction::new([0.3, 0.0, -1.2], [0.2, 0.3, 1.0]).unwrap();
        let good = weak_residual(&f, &phi, &p).unwrap();
        let mut wrong = p.clone();
        wrong.influx = Arc::new(|_, _, _| 3.0);
        let bad = weak_residual(&f, &phi, &wrong).unwrap();
        let margin = phi.boundary_moment(0.0).abs();
        assert!(good.value < 2e-2 * margin, "{good:?}");
        assert!(bad.value - good.value >= margin * (1.0 - 1e-2), "{} vs {margin}", bad.value);
    }
}
