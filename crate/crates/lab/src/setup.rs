//! Turning a [`Scenario`] into core objects.

use std::sync::Arc;

use kfp_core::geometry::Domain;
use kfp_core::solver::{sample_rough_coefficients, BoundaryMode, CellPartition, ProblemSpec};
use kfp_core::galilean::Vector;
use kfp_core::transform::{Chart, CoefficientField, FnCoefficients};
use kfp_core::PhasePoint;

use crate::scenario::{Boundary, DataSpec, Diffusion, DomainSpec, Point, Scenario};
use crate::LabError;

pub fn domain<const D: usize>(spec: &DomainSpec) -> Result<Domain<D>, LabError> {
    let arr = |v: &[f64]| -> Result<[f64; D], LabError> {
        v.try_into().map_err(|_| LabError::Usage(format!("expected {D} normal components, got {}", v.len())))
    };
    Ok(match spec {
        DomainSpec::Whole => Domain::Whole,
        DomainSpec::HalfSpace { normal, offset } => Domain::half_space(arr(normal)?, *offset)?,
        DomainSpec::Polytope { faces } => {
            let faces = faces.iter().map(|(n, c)| Ok((arr(n)?, *c))).collect::<Result<Vec<_>, LabError>>()?;
            Domain::polytope(&faces)?
        }
        DomainSpec::Chart { curvature, radius, convex } => Domain::chart(Chart::quadratic(*curvature, *radius)?, *convex),
    })
}

pub fn dimension(spec: &DomainSpec) -> usize {
    match spec {
        DomainSpec::HalfSpace { normal, .. } => normal.len(),
        DomainSpec::Polytope { faces } => faces.first().map_or(1, |f| f.0.len()),
        _ => 1,
    }
}

pub fn point<const D: usize>(p: &Point) -> Result<PhasePoint<D>, LabError> {
    if p.len() != 1 + 2 * D {
        return Err(LabError::Usage(format!("phase point {p:?} does not have dimension {D}")));
    }
    let mut x = Vector::<D>::zeros();
    let mut v = Vector::<D>::zeros();
    for i in 0..D {
        x[i] = p[1 + i];
        v[i] = p[1 + D + i];
    }
    let z = PhasePoint { t: p[0], x, v };
    if !z.is_finite() {
        return Err(LabError::Usage("phase point must be finite".into()));
    }
    Ok(z)
}

pub fn coefficients(s: &Scenario) -> Result<Arc<dyn CoefficientField<1>>, LabError> {
    let c = &s.coefficients;
    let (drift, source) = (c.drift, c.source);
    let base = match c.diffusion {
        Diffusion::Constant(a) => FnCoefficients::constant(a, [drift], source)?,
        Diffusion::Rough { seed, lambda, big_lambda, cells } => {
            let g = &s.grid;
            let v = g.velocity_bound;
            let partition = CellPartition { lo: [g.t_start, g.x_left, -v], hi: [g.t_end, g.x_right, v], size: cells };
            sample_rough_coefficients(seed, lambda, big_lambda, partition)?
                .into_coefficients()
                .with_drift(move |_| Vector::<1>::new(drift))
                .with_source(move |_| source)
        }
    };
    Ok(Arc::new(base))
}

fn data_fn(d: &DataSpec) -> kfp_core::solver::DataFn {
    let d = d.clone();
    Arc::new(move |t, x, v| d.eval(t, x, v))
}

pub fn problem(s: &Scenario) -> Result<ProblemSpec, LabError> {
    let g = &s.grid;
    let mut p = ProblemSpec::new(g.x_left, g.velocity_bound, coefficients(s)?);
    p.x_right = g.x_right;
    p.t_start = g.t_start;
    p.t_end = g.t_end;
    p.nx = g.nx;
    p.nv = g.nv;
    p.dt = g.dt;
    p.store_every = g.store_every;
    p.boundary = match s.data.boundary {
        Boundary::Influx => BoundaryMode::Influx,
        Boundary::Specular => BoundaryMode::Specular,
        Boundary::Periodic => BoundaryMode::Periodic,
    };
    let (left, right) = (data_fn(&s.data.influx_left), data_fn(&s.data.influx_right));
    let mid = 0.5 * (g.x_left + g.x_right);
    p.influx = Arc::new(move |t, x, v| if x < mid { left(t, x, v) } else { right(t, x, v) });
    p.initial = data_fn(&s.data.initial);
    p.validate()?;
    Ok(p)
}

/// Dyadic radii from the diagnostics section.
pub fn radii(s: &Scenario) -> Vec<f64> {
    kfp_core::analysis::dyadic_radii(s.diagnostics.radius, s.diagnostics.radii_count)
}
