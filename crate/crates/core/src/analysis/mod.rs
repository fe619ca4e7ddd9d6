//! Measurements on solution fields: oscillation and sup decay over nested
//! kinetic cylinders, Hölder seminorms, weak-form residuals and the local
//! `L∞`-to-`L²` ratio.

mod decay;
mod holder;
mod linfty;
mod region;
mod weak;

pub use decay::{
    decay_report, dyadic_radii, fit_exponent, vanishing_order, DecayReport, ExponentFit, GeometricDecay,
    INFINITE_ORDER_THRESHOLD, MONOTONE_SLACK, RELATIVE_FLOOR,
};
pub use holder::{holder_seminorm, MAX_HOLDER_POINTS};
pub use linfty::{extend_by_zero, linfty_ratio, LinftyRatio, ZeroOutside};
pub use region::{nested_stats, oscillation, region_points, RegionStats, Sampling};
pub use weak::{weak_residual, TestFunction, WeakResidual, BUMP_MASS};
