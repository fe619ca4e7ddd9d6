//! Numerical laboratory for kinetic Fokker-Planck equations
//!
//! ```text
//! (∂t + v·∇x) f − ∂vi (aij ∂vj f) = −bi ∂vi f + G   in (T1, T2) × Ω × ℝᵈ
//!                               f = g                 on γ₋
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) and is split by concern:
//!
//! - [`galilean`]: the Galilean group on phase space, kinetic scaling, the
//!   left-invariant kinetic distance, one-sided mollifiers and group convolution.
//! - [`geometry`]: spatial domains, kinetic cylinders `Q_r(z)`, boundary
//!   classification and volume estimates of `H_r(z) = Q_r(z) ∩ {x ∈ Ω}`.
//! - [`transform`]: boundary-flattening charts, coefficient transport and the
//!   mirror extension used for specular reflection.
//! - [`solver`]: a one-dimensional split-step solver (semi-Lagrangian transport,
//!   implicit velocity diffusion) with influx, specular or periodic boundaries.
//! - [`analysis`]: oscillation and sup-norm decay, Hölder seminorms, weak-form
//!   residuals and exponent fitting.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub mod field;
pub mod galilean;
pub mod geometry;
pub mod rng;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use field::{FnField, Grid, PhaseField, SolutionField};
pub use galilean::PhasePoint;
