//! Kinetic cylinders `Q_r(z⁰) = z⁰ ∘ ((−r², 0] × B_{r³} × B_r)` and volume
//! estimates of their intersection with the domain.

#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;

use super::{Domain, HalfSpace};
use crate::galilean::{PhasePoint, Vector};
use crate::rng::{stream, uniform, uniform_ball, unit_ball_volume};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticCylinder<const D: usize> {
    pub center: PhasePoint<D>,
    pub radius: f64,
}

impl<const D: usize> KineticCylinder<D> {
    pub fn new(center: PhasePoint<D>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositive { what: "cylinder radius", value: radius });
        }
        if !center.is_finite() {
            return Err(Error::NonFinite { what: "cylinder center" });
        }
        Ok(Self { center, radius })
    }

    /// Membership through the pullback `(z⁰)⁻¹ ∘ z`.
    pub fn contains(&self, z: &PhasePoint<D>) -> bool {
        let y = self.center.inverse().compose(z);
        let r = self.radius;
        y.t > -r * r && y.t <= 0.0 && y.x.norm() < r * r * r && y.v.norm() < r
    }

    /// `r^{2+4d} |Q₁|` with `|Q₁| = |B₁|²`.
    pub fn volume(&self) -> f64 {
        let b = unit_ball_volume(D);
        self.radius.powi(2 + 4 * D as i32) * b * b
    }

    /// Uniform sample: the pullback of a uniform point of `Q_r`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PhasePoint<D> {
        let r = self.radius;
        // (−r², 0]: u ∈ [0, 1) never reaches the open end
        let s = -r * r * rng.random::<f64>();
        let y = uniform_ball::<R, D>(rng, r * r * r);
        let w = uniform_ball::<R, D>(rng, r);
        self.center.compose(&PhasePoint { t: s, x: y, v: w })
    }

    /// Map a point `u` of the unit cylinder `Q₁` into this cylinder.
    pub fn from_unit(&self, u: &PhasePoint<D>) -> PhasePoint<D> {
        self.center.compose(&u.dilate(self.radius))
    }

    /// Axis-aligned box containing the cylinder.
    pub fn bounding_box(&self) -> (PhasePoint<D>, PhasePoint<D>) {
        let r = self.radius;
        let c = &self.center;
        let r3 = Vector::<D>::repeat(r * r * r);
        let rv = Vector::<D>::repeat(r);
        // x = x⁰ + y + s v⁰ with s ∈ (−r², 0]
        let drift = c.v * (-r * r);
        let lo_x = c.x - r3 + drift.inf(&Vector::zeros());
        let hi_x = c.x + r3 + drift.sup(&Vector::zeros());
        (
            PhasePoint { t: c.t - r * r, x: lo_x, v: c.v - rv },
            PhasePoint { t: c.t, x: hi_x, v: c.v + rv },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractionMethod {
    /// Closed form for `d = 1` and a half-line.
    Exact1d,
    MonteCarlo { samples: usize, seed: u64 },
}

/// `∫_{s0}^{s1} clamp(α + β s, 0, 1) ds`, exactly.
fn clamped_linear_integral(alpha: f64, beta: f64, s0: f64, s1: f64) -> f64 {
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    if beta == 0.0 {
        return clamp(alpha) * (s1 - s0);
    }
    let mut cuts = [s0, (-alpha / beta).clamp(s0, s1), ((1.0 - alpha) / beta).clamp(s0, s1), s1];
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|w| {
            let len = w[1] - w[0];
            if len <= 0.0 {
                return 0.0;
            }
            // on each piece the clamp is constant or the identity
            let mid = alpha + beta * 0.5 * (w[0] + w[1]);
            if mid <= 0.0 {
                0.0
            } else if mid >= 1.0 {
                len
            } else {
                mid * len
            }
        })
        .sum()
}

/// Fraction of the slab `s ∈ (s0, s1]`, `y ∈ (−ρ, ρ)` with
/// `h + y·(n·n) + s a < 0` (one dimension).
fn half_line_fraction(h: f64, a: f64, rho: f64, s0: f64, s1: f64) -> f64 {
    // P(y < −h − a s) for y uniform on (−ρ, ρ)
    let alpha = (rho - h) / (2.0 * rho);
    let beta = -a / (2.0 * rho);
    clamped_linear_integral(alpha, beta, s0, s1) / (s1 - s0)
}

/// `|H_r(z⁰)| / |Q_r(z⁰)|` and its standard error (zero for the exact path).
pub fn inside_fraction<const D: usize>(
    c: &KineticCylinder<D>,
    dom: &Domain<D>,
    method: FractionMethod,
) -> Result<(f64, f64)> {
    match method {
        FractionMethod::Exact1d => {
            let Domain::HalfSpace(h) = dom else {
                return Err(Error::UnsupportedDomain("the exact volume fraction needs a half-line"));
            };
            if D != 1 {
                return Err(Error::Usage("the exact volume fraction is one-dimensional"));
            }
            let r = c.radius;
            let n = h.normal[0];
            let hh = c.center.x[0] * n - h.offset;
            let a = c.center.v[0] * n;
            Ok((half_line_fraction(hh, a, r * r * r, -r * r, 0.0), 0.0))
        }
        FractionMethod::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::Usage("Monte-Carlo sample count must be positive"));
            }
            let mut rng = stream(seed, 0);
            let hits = (0..samples).filter(|_| dom.contains(&c.sample(&mut rng).x)).count();
            let p = hits as f64 / samples as f64;
            Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
        }
    }
}

/// `μ*` in one dimension: `(1/4)(1/8 − 3/32)·|B_{1/2}|`.
pub const MU_STAR_1D: f64 = 1.0 / 128.0;

/// `μ* = (1/4)·|B_{1/8} ∩ {x̃·n > 3/32}|·|B_{1/2}|`.
pub fn mu_star(d: usize) -> f64 {
    let (big_r, h): (f64, f64) = (1.0 / 8.0, 3.0 / 32.0);
    let cap = match d {
        1 => big_r - h,
        2 => big_r * big_r * (h / big_r).acos() - h * (big_r * big_r - h * h).sqrt(),
        _ => panic!("unsupported dimension {d}"),
    };
    0.25 * cap * unit_ball_volume(d) * 0.5f64.powi(d as i32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QMinusReport {
    /// Estimated `|Q⁻(z⁰) ∩ {x ∉ Ω}|`.
    pub measure: f64,
    pub std_error: f64,
    pub mu_star: f64,
    /// Whether `γ₋ ∩ Q_{1/8}(z⁰) ≠ ∅`.
    pub hypothesis: bool,
    /// `measure ≥ μ* − 3σ`, checked only under the hypothesis.
    pub holds: Option<bool>,
}

const QMINUS_T: (f64, f64) = (-0.75, -0.5);
const QMINUS_X: f64 = 1.0 / 8.0;
const QMINUS_V: f64 = 0.5;

fn qminus_volume(d: usize) -> f64 {
    let b = unit_ball_volume(d);
    (QMINUS_T.1 - QMINUS_T.0) * b * QMINUS_X.powi(d as i32) * b * QMINUS_V.powi(d as i32)
}

/// Exact `|Q⁻(z⁰) ∩ {x ∉ Ω}|` for a half-line.
pub fn exterior_measure_exact_1d(z0: &PhasePoint<1>, h: &HalfSpace<1>) -> f64 {
    let n = h.normal[0];
    let inside = half_line_fraction(z0.x[0] * n - h.offset, z0.v[0] * n, QMINUS_X, QMINUS_T.0, QMINUS_T.1);
    (1.0 - inside) * qminus_volume(1)
}

/// Whether `Q_{1/8}(z⁰)` meets `γ₋`.
///
/// Exact for half-spaces: the reachable values of `x·n − c` form an open
/// interval that must contain zero, and `v·n` must reach negative values.
/// Other convex domains are checked face by face (polytopes) or by sampling.
pub fn qminus_hypothesis<const D: usize>(z0: &PhasePoint<D>, dom: &Domain<D>, seed: u64) -> Result<bool> {
    let r = 1.0 / 8.0;
    let half_space_meets = |h: &HalfSpace<D>| {
        let sd = h.signed_distance(&z0.x);
        let a = z0.v.dot(&h.normal);
        let drift = -r * r * a;
        let lo = sd + drift.min(0.0) - r * r * r;
        let hi = sd + drift.max(0.0) + r * r * r;
        lo < 0.0 && 0.0 < hi && a < r
    };
    match dom {
        Domain::Whole => Ok(false),
        Domain::HalfSpace(h) => Ok(half_space_meets(h)),
        Domain::Polytope(_) | Domain::Chart { .. } => {
            // sample pairs straddling the boundary with an incoming velocity
            let c = KineticCylinder::new(*z0, r)?;
            let mut rng = stream(seed, 0x9e37);
            let (mut inside, mut outside) = (false, false);
            for _ in 0..20_000 {
                let z = c.sample(&mut rng);
                let (sd, n) = dom.locate(&z.x)?;
                let Some(n) = n else { continue };
                if z.v.dot(&n) < 0.0 {
                    if sd < 0.0 {
                        inside = true;
                    } else {
                        outside = true;
                    }
                }
                if inside && outside {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Monte-Carlo estimate of `|Q⁻(z⁰) ∩ {x ∉ Ω}|` with
/// `Q⁻ = (−3/4, −1/2] × B_{1/8} × B_{1/2}`, compared to `μ*`.
pub fn qminus_exterior_measure<const D: usize>(
    z0: &PhasePoint<D>,
    dom: &Domain<D>,
    samples: usize,
    seed: u64,
) -> Result<QMinusReport> {
    if !dom.is_convex() {
        return Err(Error::ConvexityRequired);
    }
    if samples == 0 {
        return Err(Error::Usage("Monte-Carlo sample count must be positive"));
    }
    let hypothesis = qminus_hypothesis(z0, dom, seed)?;
    let mut rng = stream(seed, 1);
    let mut outside = 0usize;
    for _ in 0..samples {
        let s = uniform(&mut rng, QMINUS_T.0, QMINUS_T.1);
        let y = uniform_ball::<_, D>(&mut rng, QMINUS_X);
        let w = uniform_ball::<_, D>(&mut rng, QMINUS_V);
        if !dom.contains(&z0.compose(&PhasePoint { t: s, x: y, v: w }).x) {
            outside += 1;
        }
    }
    let p = outside as f64 / samples as f64;
    let vol = qminus_volume(D);
    let measure = p * vol;
    let std_error = (p * (1.0 - p) / samples as f64).sqrt() * vol;
    let mu = mu_star(D);
    Ok(QMinusReport {
        measure,
        std_error,
        mu_star: mu,
        hypothesis,
        holds: hypothesis.then_some(measure >= mu - 3.0 * std_error),
    })
}
