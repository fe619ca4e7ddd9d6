//! Report and snapshot files.
//!
//! Snapshots hold one time level. The binary form is a single ASCII header
//! line `nx nv x_min x_max v_min v_max t` followed by the values as
//! little-endian `f64`, row-major with `v` fastest.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use kfp_core::SolutionField;
use serde::Serialize;

use crate::scenario::Format;
use crate::LabError;

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), LabError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// RFC 4180 table with a header row.
pub fn write_csv<R: AsRef<[String]>>(path: &Path, header: &[&str], rows: &[R]) -> Result<(), LabError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.as_ref())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub nx: usize,
    pub nv: usize,
    pub x_range: [f64; 2],
    pub v_range: [f64; 2],
    pub t: f64,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn last_level(f: &SolutionField) -> Self {
        let g = f.grid();
        let n = g.times.len() - 1;
        Snapshot {
            nx: g.x.len,
            nv: g.v.len,
            x_range: [g.x.start, g.x.end()],
            v_range: [g.v.start, g.v.end()],
            t: g.times[n],
            values: f.level(n).to_vec(),
        }
    }

    fn header(&self) -> String {
        format!(
            "{} {} {} {} {} {} {}",
            self.nx, self.nv, self.x_range[0], self.x_range[1], self.v_range[0], self.v_range[1], self.t
        )
    }

    pub fn to_bin(&self) -> Vec<u8> {
        let mut out = self.header().into_bytes();
        out.push(b'\n');
        out.reserve(8 * self.values.len());
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bin(bytes: &[u8]) -> Result<Self, LabError> {
        let bad = |m: &str| LabError::Usage(format!("malformed snapshot: {m}"));
        let nl = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| bad("missing header"))?;
        let header = std::str::from_utf8(&bytes[..nl]).map_err(|_| bad("header is not UTF-8"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 7 {
            return Err(bad("header needs 7 fields"));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad("bad size"));
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        let (nx, nv) = (int(f[0])?, int(f[1])?);
        let payload = &bytes[nl + 1..];
        if payload.len() != 8 * nx * nv {
            return Err(bad("payload size does not match the header"));
        }
        let values = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        Ok(Snapshot {
            nx,
            nv,
            x_range: [num(f[2])?, num(f[3])?],
            v_range: [num(f[4])?, num(f[5])?],
            t: num(f[6])?,
            values,
        })
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let hx = if self.nx > 1 { (self.x_range[1] - self.x_range[0]) / (self.nx - 1) as f64 } else { 0.0 };
        let hv = if self.nv > 1 { (self.v_range[1] - self.v_range[0]) / (self.nv - 1) as f64 } else { 0.0 };
        let mut rows = Vec::with_capacity(self.values.len());
        for i in 0..self.nx {
            for j in 0..self.nv {
                rows.push(vec![
                    self.t.to_string(),
                    (self.x_range[0] + hx * i as f64).to_string(),
                    (self.v_range[0] + hv * j as f64).to_string(),
                    self.values[i * self.nv + j].to_string(),
                ]);
            }
        }
        rows
    }

    /// Writes `snapshot.{csv,json,bin}` into `dir` and returns the path.
    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf, LabError> {
        let path = dir.join(format!("snapshot.{format}"));
        match format {
            Format::Csv => write_csv(&path, &["t", "x", "v", "f"], &self.rows())?,
            Format::Json => write_json(&path, self)?,
            Format::Bin => {
                let mut w = BufWriter::new(fs::File::create(&path)?);
                w.write_all(&self.to_bin())?;
                w.flush()?;
            }
        }
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let s = Snapshot { nx: 2, nv: 3, x_range: [-1.0, 0.0], v_range: [-2.5, 2.5], t: 0.75, values: vec![0.5, -1.0, 3.25, 0.0, 1e-300, 7.0] };
        let bytes = s.to_bin();
        assert!(bytes.starts_with(b"2 3 -1 0 -2.5 2.5 0.75\n"));
        assert_eq!(Snapshot::from_bin(&bytes).unwrap(), s);
        assert!(Snapshot::from_bin(&bytes[..bytes.len() - 1]).is_err());
        assert!(Snapshot::from_bin(b"2 3 0 1\n").is_err());
    }
}
