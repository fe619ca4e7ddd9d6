//! Seeded sampling streams.
//!
//! Every Monte-Carlo call takes an explicit `seed`; independent sub-streams
//! (ensemble members, per-radius samples) are selected with the ChaCha
//! stream id, so results do not depend on scheduling.

use nalgebra::SVector;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Uniform sample from the open interval `(lo, hi)` (half-open in practice).
#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Uniform sample from the Euclidean ball of radius `r` centered at zero.
pub fn uniform_ball<R: Rng + ?Sized, const D: usize>(rng: &mut R, r: f64) -> SVector<f64, D> {
    loop {
        let p = SVector::<f64, D>::from_fn(|_, _| uniform(rng, -1.0, 1.0));
        if p.norm_squared() < 1.0 {
            return p * r;
        }
    }
}

/// Volume of the unit ball in ℝᴰ for the supported dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => core::f64::consts::PI,
        3 => 4.0 / 3.0 * core::f64::consts::PI,
        _ => panic!("unsupported dimension {d}"),
    }
}
