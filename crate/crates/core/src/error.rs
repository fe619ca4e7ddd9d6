use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be finite")]
    NonFinite { what: &'static str },
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("invalid argument: {0}")]
    Usage(&'static str),
    #[error("no incoming boundary")]
    NoIncomingBoundary,
    #[error("operation not supported for this domain kind: {0}")]
    UnsupportedDomain(&'static str),
    #[error("convexity required by Lemma (exterior measure of Q⁻)")]
    ConvexityRequired,
    #[error("boundary sign unresolvable, |φ₁| = {magnitude:e} with vanishing gradient")]
    AmbiguousBoundary { magnitude: f64 },
    #[error("point is not on the boundary (signed distance {distance:e})")]
    NotOnBoundary { distance: f64 },
    #[error("singular chart Jacobian at x = {location:?}")]
    SingularJacobian { location: [f64; 2] },
    #[error("point {location:?} lies outside the chart domain")]
    OutsideChart { location: [f64; 2] },
    #[error("mirror extension needs a flat half-space boundary: flatten first")]
    NotFlat,
    #[error("insufficient padding: kernel support needs a margin of {required} along {axis}")]
    InsufficientPadding { axis: &'static str, required: f64 },
    #[error("stability bound violated: {bound} (dt = {dt}, limit = {limit})")]
    Stability { bound: &'static str, dt: f64, limit: f64 },
    #[error("non-finite value during time march at step {step}")]
    NonFiniteValue { step: usize },
    #[error("query outside stored slab: needs {axis} in [{lo}, {hi}]")]
    OutsideSlab { axis: &'static str, lo: f64, hi: f64 },
    #[error("degenerate fit: {usable} usable pairs, at least 3 required")]
    DegenerateFit { usable: usize },
    #[error("center is not on the incoming boundary")]
    NotIncoming,
}
