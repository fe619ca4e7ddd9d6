//! One function per mode. Each writes its reports into the output
//! directory and a short human summary to `out`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use kfp_core::analysis::{decay_report, holder_seminorm, vanishing_order, DecayReport, Sampling};
use kfp_core::galilean::{distance_to_incoming, kinetic_distance_with_witness};
use kfp_core::geometry::{
    classify, exterior_measure_exact_1d, inside_fraction, qminus_exterior_measure, BoundaryClass, Domain,
    FractionMethod, KineticCylinder,
};
use kfp_core::solver::solve;
use kfp_core::{PhasePoint, SolutionField};
use serde::Serialize;

use crate::output::{write_csv, write_json, Snapshot};
use crate::scenario::{Format, Mode, Point, Scenario, VolumeMethod};
use crate::setup::{dimension, domain, point, problem, radii};
use crate::verify::{run_all, VerifyOptions};
use crate::LabError;

/// Command-line overrides of scenario fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub format: Option<Format>,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) {
        if let Some(dir) = &self.out {
            s.output.dir = dir.to_string_lossy().into_owned();
        }
        if let Some(seed) = self.seed {
            s.diagnostics.seed = seed;
        }
        if let Some(n) = self.samples {
            s.diagnostics.samples = n;
        }
        if let Some(f) = self.format {
            s.output.format = f;
        }
    }
}

/// Runs `mode` on the scenario; reports go to `s.output.dir`.
pub fn run(mode: Mode, s: &Scenario, out: &mut dyn Write) -> Result<(), LabError> {
    let dir = PathBuf::from(&s.output.dir);
    fs::create_dir_all(&dir)?;
    match mode {
        Mode::Distance => distance(s, &dir, out),
        Mode::Volume => volume(s, &dir, out),
        Mode::MuCheck => mu_check(s, &dir, out),
        Mode::Solve => solve_mode(s, &dir, out),
        Mode::Decay => decay(s, &dir, out),
        Mode::Holder => holder(s, &dir, out),
        Mode::VerifyAll => verify_all(s, &dir, out),
    }
}

fn phase_dim(p: &Point) -> usize {
    (p.len() - 1) / 2
}

fn flat<const D: usize>(z: &PhasePoint<D>) -> Vec<f64> {
    std::iter::once(z.t).chain(z.x.iter().copied()).chain(z.v.iter().copied()).collect()
}

#[derive(Serialize)]
struct DistanceReport {
    point_a: Vec<f64>,
    point_b: Vec<f64>,
    distance: f64,
    w: Vec<f64>,
    /// Distance from `point_a` to the incoming boundary, when the domain has one.
    distance_to_incoming: Option<f64>,
}

fn distance_in<const D: usize>(s: &Scenario) -> Result<DistanceReport, LabError> {
    let a = point::<D>(&s.diagnostics.point_a)?;
    let b = point::<D>(&s.diagnostics.point_b)?;
    let wit = kinetic_distance_with_witness(&a, &b);
    let incoming = if dimension(&s.domain) == D {
        match domain::<D>(&s.domain)? {
            d @ (Domain::HalfSpace(_) | Domain::Polytope(_)) => Some(distance_to_incoming(&a, &d)?.distance),
            _ => None,
        }
    } else {
        None
    };
    Ok(DistanceReport {
        point_a: flat(&a),
        point_b: flat(&b),
        distance: wit.distance,
        w: wit.w.iter().copied().collect(),
        distance_to_incoming: incoming,
    })
}

fn distance(s: &Scenario, dir: &Path, out: &mut dyn Write) -> Result<(), LabError> {
    let (da, db) = (phase_dim(&s.diagnostics.point_a), phase_dim(&s.diagnostics.point_b));
    if da != db {
        return Err(LabError::Usage("point_a and point_b have different dimensions".into()));
    }
    let rep = if da == 1 { distance_in::<1>(s)? } else { distance_in::<2>(s)? };
    writeln!(out, "d = {}", rep.distance)?;
    writeln!(out, "w = {}", rep.w.iter().map(f64::to_string).collect::<Vec<_>>().join(" "))?;
    if let Some(d) = rep.distance_to_incoming {
        writeln!(out, "distance of point_a to the incoming boundary = {d}")?;
    }
    write_json(&dir.join("distance.json"), &rep)
}

#[derive(Serialize)]
struct VolumeRow {
    center: usize,
    k: usize,
    r: f64,
    fraction: f64,
    std_error: f64,
}

fn volume_in<const D: usize>(s: &Scenario) -> Result<Vec<VolumeRow>, LabError> {
    let dom = domain::<D>(&s.domain)?;
    let q = &s.diagnostics;
    let mut rows = Vec::new();
    for (c, p) in q.centers.iter().enumerate() {
        let z = point::<D>(p)?;
        for (k, &r) in radii(s).iter().enumerate() {
            let method = match q.method {
                VolumeMethod::Exact => FractionMethod::Exact1d,
                VolumeMethod::MonteCarlo => FractionMethod::MonteCarlo {
                    samples: q.samples,
                    seed: q.seed.wrapping_add((c * 1000 + k) as u64),
                },
            };
            let (fraction, std_error) = inside_fraction(&KineticCylinder::new(z, r)?, &dom, method)?;
            rows.push(VolumeRow { center: c, k, r, fraction, std_error });
        }
    }
    Ok(rows)
}

fn volume(s: &Scenario, dir: &Path, out: &mut dyn Write) -> Result<(), LabError> {
    let rows = if dimension(&s.domain) == 1 { volume_in::<1>(s)? } else { volume_in::<2>(s)? };
    for r in &rows {
        writeln!(out, "center {} r = {} fraction = {} ± {}", r.center, r.r, r.fraction, r.std_error)?;
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.center.to_string(), r.k.to_string(), r.r.to_string(), r.fraction.to_string(), r.std_error.to_string()])
        .collect();
    write_csv(&dir.join("volume.csv"), &["center", "k", "r", "fraction", "std_error"], &table)?;
    write_json(&dir.join("volume.json"), &rows)
}

#[derive(Serialize)]
struct MuRow {
    center: Vec<f64>,
    measure: f64,
    std_error: f64,
    mu_star: f64,
    hypothesis: bool,
    holds: Option<bool>,
    exact: Option<f64>,
}

fn mu_in<const D: usize>(s: &Scenario) -> Result<Vec<MuRow>, LabError> {
    let dom = domain::<D>(&s.domain)?;
    let q = &s.diagnostics;
    let mut rows = Vec::new();
    for (c, p) in q.centers.iter().enumerate() {
        let z = point::<D>(p)?;
        let rep = qminus_exterior_measure(&z, &dom, q.samples, q.seed.wrapping_add(c as u64))?;
        let exact = match (&dom, D) {
            (Domain::HalfSpace(h), 1) => Some(exterior_measure_exact_1d(&point::<1>(p)?, &one_dim(h))),
            _ => None,
        };
        rows.push(MuRow {
            center: flat(&z),
            measure: rep.measure,
            std_error: rep.std_error,
            mu_star: rep.mu_star,
            hypothesis: rep.hypothesis,
            holds: rep.holds,
            exact,
        });
    }
    Ok(rows)
}

fn one_dim<const D: usize>(h: &kfp_core::geometry::HalfSpace<D>) -> kfp_core::geometry::HalfSpace<1> {
    kfp_core::geometry::HalfSpace { normal: kfp_core::galilean::Vector::<1>::new(h.normal[0]), offset: h.offset }
}

fn mu_check(s: &Scenario, dir: &Path, out: &mut dyn Write) -> Result<(), LabError> {
    let rows = if dimension(&s.domain) == 1 { mu_in::<1>(s)? } else { mu_in::<2>(s)? };
    for r in &rows {
        let verdict = match r.holds {
            Some(true) => "holds",
            Some(false) => "VIOLATED",
            None => "hypothesis not met",
        };
        writeln!(out, "center {:?}: |Q⁻ ∩ Ωᶜ| = {} ± {} vs μ* = {} ({verdict})", r.center, r.measure, r.std_error, r.mu_star)?;
    }
    write_json(&dir.join("mu_check.json"), &rows)?;
    if rows.iter().any(|r| r.holds == Some(false)) {
        return Err(LabError::Assertion("exterior measure of Q⁻ below μ*".into()));
    }
    Ok(())
}

fn solved(s: &Scenario) -> Result<(SolutionField, Domain<1>), LabError> {
    if dimension(&s.domain) != 1 {
        return Err(LabError::Usage("the solver is one-dimensional".into()));
    }
    let p = problem(s)?;
    let dom = match s.data.boundary {
        crate::scenario::Boundary::Periodic => Domain::Whole,
        _ => Domain::half_space([1.0], s.grid.x_right)?,
    };
    Ok((solve(&p)?, dom))
}

#[derive(Serialize)]
struct SolveSummary {
    nx: usize,
    nv: usize,
    levels: usize,
    t_end: f64,
    min: f64,
    max: f64,
    mass: f64,
    snapshot: String,
}

fn solve_mode(s: &Scenario, dir: &Path, out: &mut dyn Write) -> Result<(), LabError> {
    let (f, _) = solved(s)?;
    let snap = Snapshot::last_level(&f);
    let path = snap.write(dir, s.output.format)?;
    let g = f.grid();
    let (min, max) = snap.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mass = snap.values.iter().sum::<f64>() * g.x.step * g.v.step;
    let summary = SolveSummary {
        nx: snap.nx,
        nv: snap.nv,
        levels: g.times.len(),
        t_end: snap.t,
        min,
        max,
        mass,
        snapshot: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
    };
    writeln!(out, "solved to t = {} on {} x {} nodes; min {min}, max {max}, mass {mass}", snap.t, snap.nx, snap.nv)?;
    writeln!(out, "snapshot: {}", path.display())?;
    write_json(&dir.join("solve.json"), &summary)
}

#[derive(Serialize)]
struct FitOut {
    exponent: f64,
    intercept: f64,
    residual: f64,
}

#[derive(Serialize)]
struct DecayOut {
    center: Vec<f64>,
    radii: Vec<f64>,
    osc: Vec<f64>,
    sup: Vec<f64>,
    q: Vec<f64>,
    resolved: Vec<bool>,
    osc_fit: Option<FitOut>,
    sup_fit: Option<FitOut>,
    infinite_order: Option<bool>,
    theta: Option<f64>,
    consistent: Option<bool>,
}

fn decay_out(rep: &DecayReport) -> DecayOut {
    let fit = |f: &Option<kfp_core::analysis::ExponentFit>| {
        f.map(|f| FitOut { exponent: f.exponent, intercept: f.intercept, residual: f.residual })
    };
    let geo = rep.geometric_decay();
    DecayOut {
        center: flat(&rep.center),
        radii: rep.radii.clone(),
        osc: rep.osc.clone(),
        sup: rep.sup.clone(),
        q: rep.q.clone(),
        resolved: rep.resolved.clone(),
        osc_fit: fit(&rep.osc_fit),
        sup_fit: fit(&rep.sup_fit),
        infinite_order: rep.infinite_order,
        theta: geo.map(|g| g.theta),
        consistent: geo.map(|g| g.consistent),
    }
}

fn decay(s: &Scenario, dir: &Path, out: &mut dyn Write) -> Result<(), LabError> {
    let (f, dom) = solved(s)?;
    let radii = radii(s);
    let opts = Sampling { samples: 4096, seed: s.diagnostics.seed };
    let mut reports = Vec::new();
    for (c, p) in s.diagnostics.centers.iter().enumerate() {
        let z = point::<1>(p)?;
        let rep = if classify(&z, &dom)? == BoundaryClass::Incoming {
            vanishing_order(&f, &z, &radii, &dom, opts)?
        } else {
            decay_report(&f, &z, &radii, &dom, opts)?
        };
        let rows: Vec<Vec<String>> = (0..radii.len())
            .map(|k| {
                vec![
                    k.to_string(),
                    radii[k].to_string(),
                    rep.osc[k].to_string(),
                    rep.sup[k].to_string(),
                    rep.q.get(k).map(f64::to_string).unwrap_or_default(),
                ]
            })
            .collect();
        write_csv(&dir.join(format!("decay_{c}.csv")), &["k", "r", "osc", "sup", "q_k"], &rows)?;
        let o = decay_out(&rep);
        match &o.osc_fit {
            Some(fit) => writeln!(out, "center {:?}: α = {} (residual {})", o.center, fit.exponent, fit.residual)?,
            None => writeln!(out, "center {:?}: too few resolved radii for a fit", o.center)?,
        }
        if let Some(v) = o.infinite_order {
            writeln!(out, "  vanishes at infinite order: {v}")?;
        }
        reports.push(o);
    }
    write_json(&dir.join("decay.json"), &reports)
}

#[derive(Serialize)]
struct HolderRow {
    center: usize,
    k: usize,
    r: f64,
    alpha: f64,
    seminorm: f64,
}

fn holder(s: &Scenario, dir: &Path, out: &mut dyn Write) -> Result<(), LabError> {
    let (f, dom) = solved(s)?;
    let q = &s.diagnostics;
    let opts = Sampling { samples: q.samples, seed: q.seed };
    let mut rows = Vec::new();
    for (c, p) in q.centers.iter().enumerate() {
        let z = point::<1>(p)?;
        for (k, &r) in radii(s).iter().enumerate() {
            let seminorm = holder_seminorm(&f, &KineticCylinder::new(z, r)?, &dom, q.alpha, opts)?;
            writeln!(out, "center {c} r = {r}: [f]_α = {seminorm}")?;
            rows.push(HolderRow { center: c, k, r, alpha: q.alpha, seminorm });
        }
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.center.to_string(), r.k.to_string(), r.r.to_string(), r.alpha.to_string(), r.seminorm.to_string()])
        .collect();
    write_csv(&dir.join("holder.csv"), &["center", "k", "r", "alpha", "seminorm"], &table)?;
    write_json(&dir.join("holder.json"), &rows)
}

fn verify_all(s: &Scenario, dir: &Path, out: &mut dyn Write) -> Result<(), LabError> {
    let opts = VerifyOptions { seed: s.diagnostics.seed, samples: s.diagnostics.samples };
    let report = run_all(s, &opts, &mut |c| {
        let _ = writeln!(out, "{}", c.line());
        for sub in &c.subchecks {
            let _ = writeln!(out, "    {}", sub.line());
        }
    })?;
    let table: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| vec![c.id.to_string(), c.name.to_string(), c.passed.to_string(), format!("{:.3}", c.seconds)])
        .collect();
    write_csv(&dir.join("verify.csv"), &["id", "name", "passed", "seconds"], &table)?;
    write_json(&dir.join("verify.json"), &report)?;
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
    writeln!(out, "{} of {} criteria passed", report.checks.len() - failed.len(), report.checks.len())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(LabError::Assertion(format!("criteria {} failed", failed.join(", "))))
    }
}
