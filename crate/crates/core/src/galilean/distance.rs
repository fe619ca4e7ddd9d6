//! The left-invariant kinetic distance
//!
//! ```text
//! dℓ(z₁, z₂) = min_w max(|t₁ − t₂|^½, |x₁ − x₂ − (t₁ − t₂) w|^⅓, |v₁ − w|, |v₂ − w|)
//! ```
//!
//! The time term does not depend on `w`, so `dℓ = max(|Δt|^½, ρ*)` with
//! `ρ*` the smallest level at which the three balls `B(v₁, ρ)`, `B(v₂, ρ)`
//! and `B(Δx/Δt, ρ³/|Δt|)` share a point. Feasibility is monotone in `ρ`,
//! which is found by bisection on an exact intersection test.

#[allow(unused_imports)]
use num_traits::Float;

use super::{PhasePoint, Vector};
use crate::geometry::{Domain, HalfSpace};
use crate::{Error, Result};

const BISECTION_STEPS: usize = 200;

/// Distance together with an optimal velocity shift `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceWitness<const D: usize> {
    pub distance: f64,
    pub w: Vector<D>,
}

/// Distance to `closure(γ₋)` with a boundary point that realizes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncomingWitness<const D: usize> {
    pub distance: f64,
    pub boundary_point: PhasePoint<D>,
    pub w: Vector<D>,
}

/// The objective `max(|Δt|^½, |Δx − Δt w|^⅓, |v₁ − w|, |v₂ − w|)` at a given `w`.
pub fn distance_objective<const D: usize>(z1: &PhasePoint<D>, z2: &PhasePoint<D>, w: &Vector<D>) -> f64 {
    let s = z1.t - z2.t;
    let dx = z1.x - z2.x - w * s;
    s.abs()
        .sqrt()
        .max(dx.norm().cbrt())
        .max((z1.v - w).norm())
        .max((z2.v - w).norm())
}

pub fn kinetic_distance<const D: usize>(z1: &PhasePoint<D>, z2: &PhasePoint<D>) -> f64 {
    kinetic_distance_with_witness(z1, z2).distance
}

pub fn kinetic_distance_with_witness<const D: usize>(z1: &PhasePoint<D>, z2: &PhasePoint<D>) -> DistanceWitness<D> {
    if z1 == z2 {
        return DistanceWitness { distance: 0.0, w: z1.v };
    }
    let s = z1.t - z2.t;
    let dx = z1.x - z2.x;
    let mid = (z1.v + z2.v) * 0.5;
    let half_gap = (z1.v - z2.v).norm() * 0.5;
    let time_term = s.abs().sqrt();

    if s == 0.0 {
        let rho = dx.norm().cbrt().max(half_gap);
        return DistanceWitness { distance: rho, w: mid };
    }

    // Levels below the time term never matter: d = max(time term, ρ*).
    let mut lo = half_gap.max(time_term);
    let feasible = |rho: f64| -> Option<Vector<D>> {
        let centers = [dx / s, z1.v, z2.v];
        let radii = [rho * rho * rho / s.abs(), rho, rho];
        three_ball_point(&centers, &radii)
    };
    if let Some(w) = feasible(lo) {
        return DistanceWitness { distance: lo, w };
    }
    let mut hi = distance_objective(z1, z2, &mid).max(lo);
    let mut best = mid;
    // the midpoint is always feasible at its own objective value
    for _ in 0..BISECTION_STEPS {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        match feasible(m) {
            Some(w) => {
                hi = m;
                best = w;
            }
            None => lo = m,
        }
    }
    DistanceWitness { distance: hi, w: best }
}

fn in_ball<const D: usize>(p: &Vector<D>, c: &Vector<D>, r: f64) -> bool {
    (p - c).norm() <= r * (1.0 + 1e-12) + 1e-300
}

/// A point in `B(c₀, r₀) ∩ B(c₁, r₁) ∩ B(c₂, r₂)`, if the intersection is nonempty.
///
/// Uses the closest point of `B₁ ∩ B₂` to `c₀`: it is `c₀` itself, a
/// projection of `c₀` onto one ball lying inside the other, or (in 2D) one
/// of the two circle intersection points.
fn three_ball_point<const D: usize>(c: &[Vector<D>; 3], r: &[f64; 3]) -> Option<Vector<D>> {
    let gap = (c[1] - c[2]).norm();
    if gap > (r[1] + r[2]) * (1.0 + 1e-12) {
        return None;
    }
    let project = |k: usize| -> Vector<D> {
        let d = c[0] - c[k];
        let n = d.norm();
        if n <= r[k] {
            c[0]
        } else {
            c[k] + d * (r[k] / n)
        }
    };
    let mut candidates = [c[0], project(1), project(2), c[0], c[0]];
    if D == 2 && gap > 0.0 {
        // circle-circle intersection of ∂B₁ and ∂B₂
        let a = (r[1] * r[1] - r[2] * r[2] + gap * gap) / (2.0 * gap);
        let h2 = r[1] * r[1] - a * a;
        let h = if h2 > 0.0 { h2.sqrt() } else { 0.0 };
        let e = (c[2] - c[1]) / gap;
        let base = c[1] + e * a;
        let mut perp = Vector::<D>::zeros();
        perp[0] = -e[1];
        perp[1] = e[0];
        candidates[3] = base + perp * h;
        candidates[4] = base - perp * h;
    }
    candidates
        .into_iter()
        .filter(|p| in_ball(p, &c[1], r[1]) && in_ball(p, &c[2], r[2]))
        .min_by(|p, q| (p - c[0]).norm().total_cmp(&(q - c[0]).norm()))
        .filter(|p| in_ball(p, &c[0], r[0]))
}

/// Independent dense-grid oracle for `dℓ`.
///
/// Minimizes one velocity coordinate at a time by nested 1D grid searches
/// that zoom onto the best node. Partial minima of a quasiconvex function
/// stay quasiconvex, so each 1D search sees a unimodal profile. Shares no
/// code with the bisection path.
pub fn kinetic_distance_grid<const D: usize>(z1: &PhasePoint<D>, z2: &PhasePoint<D>, resolution: usize) -> f64 {
    let resolution = resolution.max(5);
    let mid = (z1.v + z2.v) * 0.5;
    // any w with |w − mid| > objective(mid) has a velocity term above objective(mid)
    let half = distance_objective(z1, z2, &mid).max(1e-300);
    let mut w = mid;
    grid_axis(z1, z2, &mut w, 0, half, resolution)
}

fn grid_axis<const D: usize>(
    z1: &PhasePoint<D>,
    z2: &PhasePoint<D>,
    w: &mut Vector<D>,
    axis: usize,
    half: f64,
    resolution: usize,
) -> f64 {
    if axis == D {
        return distance_objective(z1, z2, w);
    }
    let start = *w;
    let mut center = start[axis];
    let mut span = half;
    let mut best = f64::INFINITY;
    let mut best_w = start;
    while span > 1e-13 * (1.0 + half) {
        let step = 2.0 * span / (resolution - 1) as f64;
        let mut level_best = center;
        for k in 0..resolution {
            let mut trial = start;
            trial[axis] = center - span + step * k as f64;
            let val = grid_axis(z1, z2, &mut trial, axis + 1, half, resolution);
            if val < best {
                best = val;
                best_w = trial;
                level_best = trial[axis];
            }
        }
        center = level_best;
        span = 2.0 * step;
    }
    *w = best_w;
    best
}

/// Infimum of `dℓ(z, z')` over `z'` in the closure of the incoming boundary
/// `γ₋ = {x ∈ ∂Ω, v·n < 0}` (all times).
pub fn distance_to_incoming<const D: usize>(z: &PhasePoint<D>, dom: &Domain<D>) -> Result<IncomingWitness<D>> {
    match dom {
        Domain::Whole => Err(Error::NoIncomingBoundary),
        Domain::HalfSpace(h) => Ok(half_space_incoming(z, h)),
        Domain::Polytope(faces) => {
            if faces.is_empty() {
                return Err(Error::NoIncomingBoundary);
            }
            let mut best: Option<IncomingWitness<D>> = None;
            for (k, face) in faces.iter().enumerate() {
                let exact = half_space_incoming(z, face);
                let on_face = faces
                    .iter()
                    .enumerate()
                    .all(|(j, other)| j == k || other.signed_distance(&exact.boundary_point.x) <= 1e-9);
                let candidate = if on_face { exact } else { sampled_face_incoming(z, faces, k) };
                if best.map_or(true, |b| candidate.distance < b.distance) {
                    best = Some(candidate);
                }
            }
            Ok(best.expect("non-empty face list"))
        }
        Domain::Chart { .. } => Err(Error::UnsupportedDomain(
            "distance to the incoming boundary needs a flat or polyhedral boundary; flatten first",
        )),
    }
}

/// Exact reduction for a flat boundary `{x·n = c}`.
///
/// With `h = x·n − c` and `u = w·n`, the level `ρ` is feasible iff
/// `v·n ≤ 2ρ` and `|h| ≤ ρ³ + ρ² max|u|` over `u ∈ [v·n − ρ, min(v·n + ρ, ρ)]`.
/// The state `(x⁰, v⁰)` on the closed incoming part of a flat boundary
/// closest to `(x, v)` in `max(|x⁰ − x|^⅓, |v⁰ − v|)`, at the time of `z`.
pub fn nearest_incoming_state<const D: usize>(z: &PhasePoint<D>, face: &HalfSpace<D>) -> PhasePoint<D> {
    let n = face.normal;
    let x = z.x - n * (z.x.dot(&n) - face.offset);
    let v = z.v - n * z.v.dot(&n).max(0.0);
    PhasePoint { t: z.t, x, v }
}

/// `max(|x⁰ − x|^⅓, |v⁰ − v|)`.
pub fn state_gap<const D: usize>(z: &PhasePoint<D>, z0: &PhasePoint<D>) -> f64 {
    (z.x - z0.x).norm().cbrt().max((z.v - z0.v).norm())
}

fn half_space_incoming<const D: usize>(z: &PhasePoint<D>, face: &HalfSpace<D>) -> IncomingWitness<D> {
    let n = face.normal;
    let h = z.x.dot(&n) - face.offset;
    let vn = z.v.dot(&n);
    let u_range = |rho: f64| (vn - rho, (vn + rho).min(rho));
    let feasible = |rho: f64| -> bool {
        let (ulo, uhi) = u_range(rho);
        if ulo > uhi {
            return false;
        }
        let m = ulo.abs().max(uhi.abs());
        h.abs() <= rho * rho * rho + rho * rho * m
    };
    let mut lo = (vn * 0.5).max(0.0);
    let rho = if feasible(lo) {
        lo
    } else {
        let mut hi = lo.max(1.0);
        while !feasible(hi) {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..BISECTION_STEPS {
            let m = 0.5 * (lo + hi);
            if m <= lo || m >= hi {
                break;
            }
            if feasible(m) {
                hi = m;
            } else {
                lo = m;
            }
        }
        hi
    };

    let (ulo, uhi) = u_range(rho);
    let u = if uhi.abs() > ulo.abs() { uhi } else { ulo };
    let r2 = rho * rho;
    let s = if u != 0.0 { (h / u).clamp(-r2, r2) } else { 0.0 };
    let w = z.v + n * (u - vn);
    let shifted = z.x - w * s;
    let x_b = shifted - n * (shifted.dot(&n) - face.offset);
    let v_b = w - n * w.dot(&n).max(0.0);
    IncomingWitness { distance: rho, boundary_point: PhasePoint { t: z.t - s, x: x_b, v: v_b }, w }
}

/// Sampling fallback for a polytope face whose supporting-plane witness
/// falls outside the face.
fn sampled_face_incoming<const D: usize>(z: &PhasePoint<D>, faces: &[HalfSpace<D>], k: usize) -> IncomingWitness<D> {
    let face = &faces[k];
    let n = face.normal;
    let foot = z.x - n * (z.x.dot(&n) - face.offset);
    // tangent direction (D = 2); in 1D the face is the single point `foot`
    let mut tangent = Vector::<D>::zeros();
    if D == 2 {
        tangent[0] = -n[1];
        tangent[1] = n[0];
    }
    let reach = 4.0 + z.x.norm() + z.v.norm();
    let (mut tlo, mut thi) = if D == 2 { (-reach, reach) } else { (0.0, 0.0) };
    for (j, other) in faces.iter().enumerate() {
        if j == k || D != 2 {
            continue;
        }
        // other·(foot + τ e) ≤ c_j
        let a = other.normal.dot(&tangent);
        let b = other.offset - other.normal.dot(&foot);
        if a.abs() < 1e-14 {
            if b < 0.0 {
                tlo = 1.0;
                thi = 0.0;
            }
        } else if a > 0.0 {
            thi = thi.min(b / a);
        } else {
            tlo = tlo.max(b / a);
        }
    }
    let mut best = IncomingWitness { distance: f64::INFINITY, boundary_point: *z, w: z.v };
    if tlo > thi {
        return best;
    }
    let n_pos = if D == 2 { 121 } else { 1 };
    let vn = z.v.dot(&n);
    for ip in 0..n_pos {
        let tau = if n_pos == 1 { 0.0 } else { tlo + (thi - tlo) * ip as f64 / (n_pos - 1) as f64 };
        let xb = foot + tangent * tau;
        let coarse = (z.x - xb).norm().cbrt().max(vn.max(0.0));
        let span = 2.0 * coarse + 0.1;
        for it in 0..=24 {
            let dt = -span * span + 2.0 * span * span * it as f64 / 24.0;
            for iv in 0..=24 {
                // velocities on the closed incoming side, shifted along the normal
                let shift = -span + 2.0 * span * iv as f64 / 24.0;
                let mut vb = z.v + n * shift;
                let bn = vb.dot(&n);
                if bn > 0.0 {
                    vb -= n * bn;
                }
                let zb = PhasePoint { t: z.t - dt, x: xb, v: vb };
                let dw = kinetic_distance_with_witness(z, &zb);
                if dw.distance < best.distance {
                    best = IncomingWitness { distance: dw.distance, boundary_point: zb, w: dw.w };
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, uniform};
    use proptest::prelude::*;

    fn p1(t: f64, x: f64, v: f64) -> PhasePoint<1> {
        PhasePoint::raw(t, [x], [v])
    }

    #[test]
    fn zero_on_diagonal() {
        let z = p1(0.3, 0.1, -0.4);
        assert_eq!(kinetic_distance(&z, &z), 0.0);
    }

    #[test]
    fn velocity_gap_example() {
        // optimum at w = 1/2 where both velocity terms equal 1/2
        let d = kinetic_distance(&p1(0.0, 0.0, 0.0), &p1(0.0, 0.0, 1.0));
        assert!((d - 0.5).abs() < 1e-12);
        assert!((kinetic_distance_grid(&p1(0.0, 0.0, 0.0), &p1(0.0, 0.0, 1.0), 41) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn boundary_anchor_example() {
        let a = p1(0.25 * 0.25, -0.25 * 0.25, -1.0);
        let b = p1(0.0, 0.0, -1.0);
        let w = kinetic_distance_with_witness(&a, &b);
        assert!((w.distance - 0.25).abs() < 1e-12);
        assert!((w.w[0] + 1.0).abs() < 1e-9);
        let d = kinetic_distance(&p1(0.25, -0.25, -1.0), &b);
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn simultaneous_points_use_closed_form() {
        let d = kinetic_distance(&p1(1.0, 0.008, 0.0), &p1(1.0, 0.0, 0.1));
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn matches_grid_oracle_2d() {
        let mut rng = stream(11, 0);
        for _ in 0..200 {
            let mut c = [0.0; 10];
            for v in &mut c {
                *v = uniform(&mut rng, -2.0, 2.0);
            }
            let a = PhasePoint::<2>::raw(c[0], [c[1], c[2]], [c[3], c[4]]);
            let b = PhasePoint::<2>::raw(c[5], [c[6], c[7]], [c[8], c[9]]);
            let fast = kinetic_distance(&a, &b);
            let slow = kinetic_distance_grid(&a, &b, 21);
            assert!((fast - slow).abs() < 1e-6, "{fast} vs {slow} for {a:?} {b:?}");
            // the witness must realize the reported value
            let w = kinetic_distance_with_witness(&a, &b);
            assert!((distance_objective(&a, &b, &w.w) - w.distance).abs() < 1e-9);
        }
    }

    #[test]
    fn incoming_distance_on_boundary_is_zero() {
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let w = distance_to_incoming(&p1(0.7, 0.0, -0.3), &dom).unwrap();
        assert_eq!(w.distance, 0.0);
    }

    /// Brute force over boundary samples `(t', 0, v')`, `v' ≤ 0`, using the grid oracle.
    fn brute_incoming_1d(z: &PhasePoint<1>) -> f64 {
        let mut best = f64::INFINITY;
        for it in 0..=60 {
            let tb = z.t - 0.12 + 0.16 * it as f64 / 60.0;
            for iv in 0..=60 {
                let vb = -1.6 + 1.6 * iv as f64 / 60.0;
                best = best.min(kinetic_distance_grid(z, &p1(tb, 0.0, vb), 15));
            }
        }
        best
    }

    #[test]
    fn incoming_distance_matches_brute_force() {
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let z = p1(1.0 / 16.0, -1.0 / 16.0, -1.0);
        let w = distance_to_incoming(&z, &dom).unwrap();
        // level set reduction: ρ² (1 + ρ) + ρ³ = 1/16
        let root = {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..100 {
                let m = 0.5 * (lo + hi);
                if m * m * (1.0 + m) + m * m * m >= 1.0 / 16.0 {
                    hi = m
                } else {
                    lo = m
                }
            }
            hi
        };
        assert!((w.distance - root).abs() < 1e-10, "{} vs {root}", w.distance);
        assert!(w.distance < 0.25);
        let brute = brute_incoming_1d(&z);
        assert!(brute >= w.distance - 1e-9 && brute - w.distance < 5e-3, "brute {brute}");
        // the witness is a closed-γ₋ point at the reported distance
        assert!(w.boundary_point.x[0].abs() < 1e-12 && w.boundary_point.v[0] <= 0.0);
        assert!((kinetic_distance(&z, &w.boundary_point) - w.distance).abs() < 1e-9);
        // |x⁰ − x| ≤ d³ + d² |w| along the optimal shift
        let gap = (w.boundary_point.x[0] - z.x[0]).abs();
        assert!(gap <= w.distance.powi(3) + w.distance.powi(2) * w.w.norm() + 1e-12);
    }

    #[test]
    fn incoming_distance_outgoing_point() {
        let dom = Domain::half_space([1.0], 0.0).unwrap();
        let z = p1(0.0, -0.01, 1.0);
        let w = distance_to_incoming(&z, &dom).unwrap();
        assert!(w.distance >= 0.5 - 1e-12);
        let brute = brute_incoming_1d(&z);
        assert!((brute - w.distance).abs() < 2e-2, "{brute} vs {}", w.distance);
        assert!((kinetic_distance(&z, &w.boundary_point) - w.distance).abs() < 1e-9);
    }

    #[test]
    fn polytope_falls_back_to_faces() {
        let dom = Domain::polytope(&[([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0)]).unwrap();
        let z = PhasePoint::<2>::raw(0.0, [-0.2, -0.3], [-0.5, 0.1]);
        let poly = distance_to_incoming(&z, &dom).unwrap();
        let half = distance_to_incoming(&z, &Domain::half_space([1.0, 0.0], 0.0).unwrap()).unwrap();
        assert!(poly.distance >= half.distance.min(poly.distance) - 1e-12);
        assert!((kinetic_distance(&z, &poly.boundary_point) - poly.distance).abs() < 1e-6);
        assert!(matches!(distance_to_incoming(&z, &Domain::<2>::Whole), Err(Error::NoIncomingBoundary)));
    }

    fn point1() -> impl Strategy<Value = PhasePoint<1>> {
        prop::array::uniform3(-2.0..2.0f64).prop_map(|c| PhasePoint::raw(c[0], [c[1]], [c[2]]))
    }

    proptest! {
        #[test]
        fn symmetric(a in point1(), b in point1()) {
            prop_assert!((kinetic_distance(&a, &b) - kinetic_distance(&b, &a)).abs() < 1e-9);
        }

        #[test]
        fn left_invariant(a in point1(), b in point1(), g in point1()) {
            let d0 = kinetic_distance(&a, &b);
            let d1 = kinetic_distance(&g.compose(&a), &g.compose(&b));
            prop_assert!((d0 - d1).abs() < 1e-6);
        }

        #[test]
        fn homogeneous(a in point1(), b in point1(), k in 0usize..4) {
            let r = [0.25, 0.5, 2.0, 4.0][k];
            let d0 = kinetic_distance(&a, &b);
            let d1 = kinetic_distance(&a.dilate(r), &b.dilate(r));
            prop_assert!((d1 - r * d0).abs() < 1e-6 * r);
        }

        #[test]
        fn incoming_is_lower_bound_of_boundary_samples(z in point1(), tb in -2.0..2.0f64, vb in -2.0..0.0f64) {
            let dom = Domain::half_space([1.0], 0.0).unwrap();
            let inf = distance_to_incoming(&z, &dom).unwrap().distance;
            prop_assert!(inf <= kinetic_distance(&z, &p1(tb, 0.0, vb)) + 1e-9);
        }
    }
}
