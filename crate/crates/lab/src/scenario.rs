//! Scenario files: flat `[section]` / `key = value` text.
//!
//! Every key is typed and known in advance; unknown sections and keys are
//! rejected with their line and column. [`Scenario::to_text`] writes the
//! canonical form, which parses back to the same value.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Distance,
    Volume,
    MuCheck,
    Solve,
    Decay,
    Holder,
    VerifyAll,
}

impl Mode {
    pub const ALL: [Mode; 7] =
        [Mode::Distance, Mode::Volume, Mode::MuCheck, Mode::Solve, Mode::Decay, Mode::Holder, Mode::VerifyAll];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Distance => "distance",
            Mode::Volume => "volume",
            Mode::MuCheck => "mu-check",
            Mode::Solve => "solve",
            Mode::Decay => "decay",
            Mode::Holder => "holder",
            Mode::VerifyAll => "verify-all",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Spatial domain. Charts are one-dimensional quadratic bends `x ↦ x + κx²/2`
/// flagged convex or not.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Whole,
    HalfSpace { normal: Vec<f64>, offset: f64 },
    Polytope { faces: Vec<(Vec<f64>, f64)> },
    Chart { curvature: f64, radius: f64, convex: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diffusion {
    Constant(f64),
    Rough { seed: u64, lambda: f64, big_lambda: f64, cells: [f64; 3] },
}

impl fmt::Display for Diffusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diffusion::Constant(a) => write!(f, "constant {a}"),
            Diffusion::Rough { seed, lambda, big_lambda, cells } => {
                write!(f, "rough {seed} {lambda} {big_lambda} {} {} {}", cells[0], cells[1], cells[2])
            }
        }
    }
}

impl FromStr for Diffusion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["constant", a] => Ok(Diffusion::Constant(num(a)?)),
            ["rough", seed, l, big, ct, cx, cv] => Ok(Diffusion::Rough {
                seed: seed.parse().map_err(|_| format!("bad seed `{seed}`"))?,
                lambda: num(l)?,
                big_lambda: num(big)?,
                cells: [num(ct)?, num(cx)?, num(cv)?],
            }),
            _ => Err(format!("expected `constant <a>` or `rough <seed> <λ> <Λ> <ct> <cx> <cv>`, got `{s}`")),
        }
    }
}

/// Closed-form data `(t, x, v) ↦ value` for influx and initial fields.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    Zero,
    Constant(f64),
    /// `c (1 + amp sin(freq t + v))`
    Wave { c: f64, amp: f64, freq: f64 },
    /// `|v − v₀|^α`
    Holder { alpha: f64, v0: f64 },
    /// Centered normal density in `v` with variance `σ²`.
    Gaussian { variance: f64 },
}

impl DataSpec {
    pub fn eval(&self, t: f64, _x: f64, v: f64) -> f64 {
        match *self {
            DataSpec::Zero => 0.0,
            DataSpec::Constant(c) => c,
            DataSpec::Wave { c, amp, freq } => c * (1.0 + amp * (freq * t + v).sin()),
            DataSpec::Holder { alpha, v0 } => (v - v0).abs().powf(alpha),
            DataSpec::Gaussian { variance } => {
                (-v * v / (2.0 * variance)).exp() / (2.0 * std::f64::consts::PI * variance).sqrt()
            }
        }
    }
}

impl fmt::Display for DataSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSpec::Zero => write!(f, "zero"),
            DataSpec::Constant(c) => write!(f, "constant {c}"),
            DataSpec::Wave { c, amp, freq } => write!(f, "wave {c} {amp} {freq}"),
            DataSpec::Holder { alpha, v0 } => write!(f, "holder {alpha} {v0}"),
            DataSpec::Gaussian { variance } => write!(f, "gaussian {variance}"),
        }
    }
}

impl FromStr for DataSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["zero"] => Ok(DataSpec::Zero),
            ["constant", c] => Ok(DataSpec::Constant(num(c)?)),
            ["wave", c, a, w] => Ok(DataSpec::Wave { c: num(c)?, amp: num(a)?, freq: num(w)? }),
            ["holder", a, v0] => Ok(DataSpec::Holder { alpha: num(a)?, v0: num(v0)? }),
            ["gaussian", s2] => Ok(DataSpec::Gaussian { variance: num(s2)? }),
            _ => Err(format!(
                "expected `zero`, `constant <c>`, `wave <c> <amp> <freq>`, `holder <α> <v0>` or `gaussian <σ²>`, got `{s}`"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Influx,
    Specular,
    Periodic,
}

impl FromStr for Boundary {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "influx" => Ok(Boundary::Influx),
            "specular" => Ok(Boundary::Specular),
            "periodic" => Ok(Boundary::Periodic),
            _ => Err(format!("unknown boundary mode `{s}`")),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Influx => "influx",
            Boundary::Specular => "specular",
            Boundary::Periodic => "periodic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Bin,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "bin" => Ok(Format::Bin),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Bin => "bin",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMethod {
    Exact,
    MonteCarlo,
}

impl FromStr for VolumeMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(VolumeMethod::Exact),
            "monte-carlo" => Ok(VolumeMethod::MonteCarlo),
            _ => Err(format!("unknown volume method `{s}`")),
        }
    }
}

impl fmt::Display for VolumeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VolumeMethod::Exact => "exact",
            VolumeMethod::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub diffusion: Diffusion,
    pub drift: f64,
    pub source: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Data {
    pub boundary: Boundary,
    /// Influx at the left end (`v > 0`).
    pub influx_left: DataSpec,
    /// Influx at the right end (`v < 0`).
    pub influx_right: DataSpec,
    pub initial: DataSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_left: f64,
    pub x_right: f64,
    pub velocity_bound: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub nx: usize,
    pub nv: usize,
    pub dt: f64,
    pub store_every: usize,
}

/// Phase points are written `t x v` (one dimension) or `t x1 x2 v1 v2`.
pub type Point = Vec<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub centers: Vec<Point>,
    pub point_a: Point,
    pub point_b: Point,
    pub radius: f64,
    pub radii_count: usize,
    pub alpha: f64,
    pub method: VolumeMethod,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub dir: String,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub mode: Mode,
    pub domain: DomainSpec,
    pub coefficients: Coefficients,
    pub data: Data,
    pub grid: GridSpec,
    pub diagnostics: Diagnostics,
    pub output: Output,
}

impl Default for Scenario {
    /// The half-line benchmark: `Ω = (−1, 0)`, rough coefficients, zero influx.
    fn default() -> Self {
        Scenario {
            name: "half-line".into(),
            mode: Mode::VerifyAll,
            domain: DomainSpec::HalfSpace { normal: vec![1.0], offset: 0.0 },
            coefficients: Coefficients {
                diffusion: Diffusion::Rough { seed: 0, lambda: 0.5, big_lambda: 2.0, cells: [0.25, 0.25, 0.5] },
                drift: 0.0,
                source: 0.0,
            },
            data: Data {
                boundary: Boundary::Influx,
                influx_left: DataSpec::Zero,
                influx_right: DataSpec::Zero,
                initial: DataSpec::Gaussian { variance: 1.0 },
            },
            grid: GridSpec {
                x_left: -1.0,
                x_right: 0.0,
                velocity_bound: 3.0,
                t_start: 0.0,
                t_end: 1.0,
                nx: 129,
                nv: 60,
                dt: 1.0 / 384.0,
                store_every: 1,
            },
            diagnostics: Diagnostics {
                centers: vec![vec![1.0, -0.5, 0.5], vec![1.0, 0.0, 0.0], vec![1.0, 0.0, -1.0]],
                point_a: vec![0.25, -0.25, -1.0],
                point_b: vec![0.0, 0.0, -1.0],
                radius: 0.5,
                radii_count: 5,
                alpha: 0.5,
                method: VolumeMethod::Exact,
                samples: 100_000,
                seed: 0,
            },
            output: Output { dir: "out".into(), format: Format::Json },
        }
    }
}

fn num(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("expected a number, got `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got `{s}`"))
    }
}

fn numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split_whitespace().map(num).collect()
}

fn points(s: &str) -> Result<Vec<Point>, String> {
    s.split(';').map(str::trim).filter(|p| !p.is_empty()).map(point).collect()
}

fn point(s: &str) -> Result<Point, String> {
    let p = numbers(s)?;
    match p.len() {
        3 | 5 => Ok(p),
        n => Err(format!("a phase point needs 3 (d = 1) or 5 (d = 2) numbers, got {n}")),
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected `true` or `false`, got `{s}`")),
    }
}

fn parse_int<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("expected a non-negative integer, got `{s}`"))
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("scenario", &["name", "mode"]),
    ("domain", &["kind", "normal", "offset", "faces", "curvature", "radius", "convex"]),
    ("coefficients", &["diffusion", "drift", "source"]),
    ("data", &["boundary", "influx_left", "influx_right", "initial"]),
    ("grid", &["x_left", "x_right", "velocity_bound", "t_start", "t_end", "nx", "nv", "dt", "store_every"]),
    ("diagnostics", &["centers", "point_a", "point_b", "radius", "radii_count", "alpha", "method", "samples", "seed"]),
    ("output", &["dir", "format"]),
];

struct Entry {
    line: usize,
    column: usize,
    value_column: usize,
    value: String,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut s = Scenario::default();
        let mut section: Option<&'static str> = None;
        let mut domain: Vec<(&'static str, Entry)> = Vec::new();
        let mut domain_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim_start();
            let indent = raw.len() - trimmed.len();
            let body = trimmed.trim_end();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return Err(err(line, indent + 1, "unterminated section header"));
                };
                let name = name.trim();
                let Some((known, _)) = SECTIONS.iter().find(|(n, _)| *n == name) else {
                    return Err(err(line, indent + 2, format!("unknown section `{name}`")));
                };
                section = Some(known);
                if *known == "domain" {
                    domain_line = line;
                }
                continue;
            }
            let Some(eq) = body.find('=') else {
                return Err(err(line, indent + 1, "expected `key = value`"));
            };
            let key = body[..eq].trim();
            let after = &body[eq + 1..];
            let value = after.trim();
            let value_column = indent + eq + 2 + (after.len() - after.trim_start().len());
            let Some(sec) = section else {
                return Err(err(line, indent + 1, "key outside of any section"));
            };
            let keys = SECTIONS.iter().find(|(n, _)| *n == sec).map(|(_, k)| *k).unwrap_or(&[]);
            let Some(&key) = keys.iter().find(|k| **k == key) else {
                return Err(err(line, indent + 1, format!("unknown key `{key}` in section [{sec}]")));
            };
            let entry = Entry { line, column: indent + 1, value_column, value: value.to_string() };
            let at = |m: String| err(line, value_column, m);
            match (sec, key) {
                ("scenario", "name") => s.name = value.to_string(),
                ("scenario", "mode") => s.mode = value.parse().map_err(at)?,
                ("domain", _) => {
                    if domain.iter().any(|(k, _)| *k == key) {
                        return Err(err(line, entry.column, format!("duplicate key `{key}`")));
                    }
                    domain.push((key, entry));
                }
                ("coefficients", "diffusion") => s.coefficients.diffusion = value.parse().map_err(at)?,
                ("coefficients", "drift") => s.coefficients.drift = num(value).map_err(at)?,
                ("coefficients", "source") => s.coefficients.source = num(value).map_err(at)?,
                ("data", "boundary") => s.data.boundary = value.parse().map_err(at)?,
                ("data", "influx_left") => s.data.influx_left = value.parse().map_err(at)?,
                ("data", "influx_right") => s.data.influx_right = value.parse().map_err(at)?,
                ("data", "initial") => s.data.initial = value.parse().map_err(at)?,
                ("grid", "x_left") => s.grid.x_left = num(value).map_err(at)?,
                ("grid", "x_right") => s.grid.x_right = num(value).map_err(at)?,
                ("grid", "velocity_bound") => s.grid.velocity_bound = num(value).map_err(at)?,
                ("grid", "t_start") => s.grid.t_start = num(value).map_err(at)?,
                ("grid", "t_end") => s.grid.t_end = num(value).map_err(at)?,
                ("grid", "nx") => s.grid.nx = parse_int(value).map_err(at)?,
                ("grid", "nv") => s.grid.nv = parse_int(value).map_err(at)?,
                ("grid", "dt") => s.grid.dt = num(value).map_err(at)?,
                ("grid", "store_every") => s.grid.store_every = parse_int(value).map_err(at)?,
                ("diagnostics", "centers") => s.diagnostics.centers = points(value).map_err(at)?,
                ("diagnostics", "point_a") => s.diagnostics.point_a = point(value).map_err(at)?,
                ("diagnostics", "point_b") => s.diagnostics.point_b = point(value).map_err(at)?,
                ("diagnostics", "radius") => s.diagnostics.radius = num(value).map_err(at)?,
                ("diagnostics", "radii_count") => s.diagnostics.radii_count = parse_int(value).map_err(at)?,
                ("diagnostics", "alpha") => s.diagnostics.alpha = num(value).map_err(at)?,
                ("diagnostics", "method") => s.diagnostics.method = value.parse().map_err(at)?,
                ("diagnostics", "samples") => s.diagnostics.samples = parse_int(value).map_err(at)?,
                ("diagnostics", "seed") => s.diagnostics.seed = parse_int(value).map_err(at)?,
                ("output", "dir") => s.output.dir = value.to_string(),
                ("output", "format") => s.output.format = value.parse().map_err(at)?,
                _ => unreachable!("key table and match arms agree"),
            }
        }
        if domain_line > 0 {
            s.domain = parse_domain(&domain, domain_line)?;
        }
        Ok(s)
    }

    /// Canonical text; `Scenario::parse(&s.to_text()) == Ok(s)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut section = |name: &str, pairs: Vec<(&str, String)>| {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&format!("[{name}]\n"));
            for (k, v) in pairs {
                out.push_str(&format!("{k} = {v}\n"));
            }
        };
        section("scenario", vec![("name", self.name.clone()), ("mode", self.mode.to_string())]);
        section(
            "domain",
            match &self.domain {
                DomainSpec::Whole => vec![("kind", "whole".into())],
                DomainSpec::HalfSpace { normal, offset } => {
                    vec![("kind", "half-space".into()), ("normal", join(normal)), ("offset", offset.to_string())]
                }
                DomainSpec::Polytope { faces } => vec![
                    ("kind", "polytope".into()),
                    (
                        "faces",
                        faces
                            .iter()
                            .map(|(n, c)| format!("{} {c}", join(n)))
                            .collect::<Vec<_>>()
                            .join("; "),
                    ),
                ],
                DomainSpec::Chart { curvature, radius, convex } => vec![
                    ("kind", "chart".into()),
                    ("curvature", curvature.to_string()),
                    ("radius", radius.to_string()),
                    ("convex", convex.to_string()),
                ],
            },
        );
        let c = &self.coefficients;
        section(
            "coefficients",
            vec![("diffusion", c.diffusion.to_string()), ("drift", c.drift.to_string()), ("source", c.source.to_string())],
        );
        let d = &self.data;
        section(
            "data",
            vec![
                ("boundary", d.boundary.to_string()),
                ("influx_left", d.influx_left.to_string()),
                ("influx_right", d.influx_right.to_string()),
                ("initial", d.initial.to_string()),
            ],
        );
        let g = &self.grid;
        section(
            "grid",
            vec![
                ("x_left", g.x_left.to_string()),
                ("x_right", g.x_right.to_string()),
                ("velocity_bound", g.velocity_bound.to_string()),
                ("t_start", g.t_start.to_string()),
                ("t_end", g.t_end.to_string()),
                ("nx", g.nx.to_string()),
                ("nv", g.nv.to_string()),
                ("dt", g.dt.to_string()),
                ("store_every", g.store_every.to_string()),
            ],
        );
        let q = &self.diagnostics;
        section(
            "diagnostics",
            vec![
                ("centers", q.centers.iter().map(|p| join(p)).collect::<Vec<_>>().join("; ")),
                ("point_a", join(&q.point_a)),
                ("point_b", join(&q.point_b)),
                ("radius", q.radius.to_string()),
                ("radii_count", q.radii_count.to_string()),
                ("alpha", q.alpha.to_string()),
                ("method", q.method.to_string()),
                ("samples", q.samples.to_string()),
                ("seed", q.seed.to_string()),
            ],
        );
        section("output", vec![("dir", self.output.dir.clone()), ("format", self.output.format.to_string())]);
        out
    }
}

fn parse_domain(entries: &[(&'static str, Entry)], header_line: usize) -> Result<DomainSpec, ParseError> {
    let get = |k: &str| entries.iter().find(|(key, _)| *key == k).map(|(_, e)| e);
    let Some(kind) = get("kind") else {
        return Err(err(header_line, 1, "[domain] needs a `kind`"));
    };
    let allowed: &[&str] = match kind.value.as_str() {
        "whole" => &["kind"],
        "half-space" => &["kind", "normal", "offset"],
        "polytope" => &["kind", "faces"],
        "chart" => &["kind", "curvature", "radius", "convex"],
        other => return Err(err(kind.line, kind.value_column, format!("unknown domain kind `{other}`"))),
    };
    for (key, e) in entries {
        if !allowed.contains(key) {
            return Err(err(e.line, e.column, format!("key `{key}` is not used by domain kind {}", kind.value)));
        }
    }
    let need = |k: &str| get(k).ok_or_else(|| err(kind.line, 1, format!("domain kind {} needs `{k}`", kind.value)));
    let at = |e: &Entry, m: String| err(e.line, e.value_column, m);
    Ok(match kind.value.as_str() {
        "whole" => DomainSpec::Whole,
        "half-space" => {
            let n = need("normal")?;
            let o = need("offset")?;
            let normal = numbers(&n.value).map_err(|m| at(n, m))?;
            if !(1..=2).contains(&normal.len()) {
                return Err(at(n, "normal needs 1 or 2 components".into()));
            }
            DomainSpec::HalfSpace { normal, offset: num(&o.value).map_err(|m| at(o, m))? }
        }
        "polytope" => {
            let f = need("faces")?;
            let mut faces = Vec::new();
            for face in f.value.split(';').map(str::trim).filter(|p| !p.is_empty()) {
                let mut v = numbers(face).map_err(|m| at(f, m))?;
                if !(2..=3).contains(&v.len()) {
                    return Err(at(f, "each face is `n1 [n2] offset`".into()));
                }
                let c = v.pop().unwrap_or_default();
                faces.push((v, c));
            }
            if faces.is_empty() || faces.iter().any(|(n, _)| n.len() != faces[0].0.len()) {
                return Err(at(f, "faces need a common, nonzero dimension".into()));
            }
            DomainSpec::Polytope { faces }
        }
        _ => {
            let (k, r, c) = (need("curvature")?, need("radius")?, need("convex")?);
            DomainSpec::Chart {
                curvature: num(&k.value).map_err(|m| at(k, m))?,
                radius: num(&r.value).map_err(|m| at(r, m))?,
                convex: parse_bool(&c.value).map_err(|m| at(c, m))?,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let s = Scenario::default();
        assert_eq!(Scenario::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn canonical_text_is_a_fixed_point() {
        let text = Scenario::default().to_text();
        assert_eq!(Scenario::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn unknown_key_reports_location() {
        let e = Scenario::parse("[grid]\nnx = 10\n  nz = 3\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        assert!(e.message.contains("nz"));
    }

    #[test]
    fn unknown_section_reports_location() {
        let e = Scenario::parse("# comment\n[grids]\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 2));
    }

    #[test]
    fn bad_value_points_at_the_value() {
        let e = Scenario::parse("[grid]\ndt = fast\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
    }

    #[test]
    fn domain_keys_depend_on_kind() {
        let e = Scenario::parse("[domain]\nkind = whole\nnormal = 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let ok = Scenario::parse("[domain]\nkind = polytope\nfaces = 1 0 0; 0 1 0\n").unwrap();
        assert_eq!(ok.domain, DomainSpec::Polytope { faces: vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)] });
    }

    #[test]
    fn data_specs_parse() {
        assert_eq!("wave 1 0.5 3".parse::<DataSpec>().unwrap(), DataSpec::Wave { c: 1.0, amp: 0.5, freq: 3.0 });
        assert!("wave 1".parse::<DataSpec>().is_err());
        assert_eq!(DataSpec::Holder { alpha: 0.5, v0: -1.0 }.eval(0.0, 0.0, -0.75), 0.5);
    }
}
