use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::sample::{PointSample, ProcessTag};
use super::window::Window;
use crate::error::{Error, Result};

/// Write one point per row under a header `x0,...,x{d-1}`.
///
/// Floats use the shortest representation that round-trips exactly.
pub fn write_csv<W: Write>(s: &PointSample, mut out: W) -> Result<()> {
    let header: Vec<String> = (0..s.dim()).map(|i| format!("x{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for p in s.points() {
        let row: Vec<String> = p.iter().map(|c| format!("{c:?}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Parse a point CSV. An empty input yields no points and dimension `None`.
pub fn read_csv_points<R: BufRead>(input: R) -> Result<(Option<usize>, Vec<Vec<f64>>)> {
    let mut dim = None;
    let mut pts = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if dim.is_none() {
            let cols: Vec<&str> = t.split(',').map(str::trim).collect();
            for (j, c) in cols.iter().enumerate() {
                if *c != format!("x{j}") {
                    return Err(Error::Parse { line: lineno, msg: format!("expected header column x{j}, found {c:?}") });
                }
            }
            dim = Some(cols.len());
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> = t.split(',').map(|c| c.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        if Some(row.len()) != dim {
            return Err(Error::Parse { line: lineno, msg: format!("expected {} columns, found {}", dim.unwrap(), row.len()) });
        }
        if row.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse { line: lineno, msg: "non-finite coordinate".into() });
        }
        pts.push(row);
    }
    Ok((dim, pts))
}

/// JSON envelope: the points plus window, seed and process provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleEnvelope {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub window: Window,
    pub process_tag: ProcessTag,
    pub points: Vec<Vec<f64>>,
}

impl SampleEnvelope {
    pub fn from_sample(s: &PointSample) -> Self {
        SampleEnvelope {
            dim: s.dim(),
            count: s.len(),
            seed: s.seed(),
            window: s.window().clone(),
            process_tag: s.process().clone(),
            points: s.points().map(|p| p.to_vec()).collect(),
        }
    }

    pub fn into_sample(self) -> Result<PointSample> {
        self.window.validate()?;
        if self.points.len() != self.count {
            return Err(Error::invalid("envelope count does not match points"));
        }
        let mut coords = Vec::with_capacity(self.count * self.dim);
        for p in &self.points {
            if p.len() != self.dim || !self.window.contains(p) {
                return Err(Error::invalid("envelope point outside window or wrong dimension"));
            }
            coords.extend_from_slice(p);
        }
        Ok(PointSample::from_parts(coords, self.window, self.seed, self.process_tag))
    }
}

pub fn write_json<W: Write>(s: &PointSample, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &SampleEnvelope::from_sample(s))?;
    Ok(())
}

pub fn read_json<R: std::io::Read>(input: R) -> Result<PointSample> {
    let env: SampleEnvelope = serde_json::from_reader(input)?;
    env.into_sample()
}
