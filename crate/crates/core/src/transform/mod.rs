//! Boundary flattening and the mirror extension.
//!
//! A chart `φ` straightens the boundary near a point; the phase-space map
//! `Φ(x, v) = (φ(x), Dφ(x) v)` preserves the form of the equation with
//!
//! ```text
//! ã = A a Aᵀ,   b̃ᵢ = Aᵢⱼ bⱼ + vⱼ vₖ ∂²φᵢ/∂xⱼ∂xₖ,   G̃ = G,   A = Dφ(x).
//! ```
//!
//! After flattening, specular reflection `Rv = v − 2(v·n)n` is removed by
//! reflecting solution and coefficients across the flat boundary.

mod chart;
mod coefficients;
mod mirror;

pub use chart::{determinant, flatten_point, spectral_norm, symmetric_eigen_range, unflatten_point, Chart, ChartBounds, ChartKind, Matrix};
pub use coefficients::{
    check_ellipticity, eigen_range, push_coefficients, CoefficientField, CoefficientSample, Ellipticity,
    FnCoefficients, Pushed,
};
pub use mirror::{mirror_extend, reflect, Mirrored};
