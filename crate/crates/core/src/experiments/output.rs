//! On-disk layout of a finished run and offline recomputation from it.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;

use super::config::{ExperimentKind, Variant};
use super::plots;
use super::runner::{extra_columns, ExperimentOutput, ReplicationRecord};
use super::summary::SummaryRow;
use crate::error::{Error, Result};

pub const RECORDS_FILE: &str = "records.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const CHECKS_FILE: &str = "checks.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PLOTS_DIR: &str = "plots";

/// Reproducibility metadata, written once per run.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub kind: ExperimentKind,
    pub config_hash: String,
    pub master_seed: u64,
    pub workers: usize,
    pub started: String,
    pub finished: String,
    pub files: Vec<String>,
}

fn variant_from(name: &str) -> Result<Variant> {
    [Variant::Poisson, Variant::Binomial, Variant::Coupled, Variant::Ginibre]
        .into_iter()
        .find(|v| v.name() == name)
        .ok_or_else(|| Error::invalid(format!("unknown variant {name}")))
}

pub fn records_header(kind: ExperimentKind, k_cap: usize) -> String {
    let mut h = String::from("config_hash,variant,grid_index,grid,replication,seed,k,value,chi");
    for j in 0..=k_cap {
        write!(h, ",s_{j}").unwrap();
    }
    for j in 0..=k_cap {
        write!(h, ",b_{j}").unwrap();
    }
    for c in extra_columns(kind) {
        write!(h, ",{c}").unwrap();
    }
    h
}

/// Floats use the shortest round-trip representation so records can be read
/// back exactly.
pub fn write_records<W: Write>(mut out: W, hash: &str, kind: ExperimentKind, k_cap: usize, records: &[ReplicationRecord]) -> Result<()> {
    writeln!(out, "{}", records_header(kind, k_cap))?;
    let mut line = String::new();
    for r in records {
        line.clear();
        write!(line, "{hash},{},{},{:?},{},{},{},{:?},{}", r.variant.name(), r.grid_index, r.grid, r.replication, r.seed, r.k, r.value, r.chi).unwrap();
        for j in 0..=k_cap {
            write!(line, ",{}", r.counts.get(j).copied().unwrap_or(0)).unwrap();
        }
        for j in 0..=k_cap {
            write!(line, ",{}", r.betti.get(j).copied().unwrap_or(0)).unwrap();
        }
        for x in &r.extras {
            write!(line, ",{x:?}").unwrap();
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Parse a records file written by [`write_records`]. Returns the config
/// hash and the records.
pub fn read_records<R: BufRead>(input: R, kind: ExperimentKind, k_cap: usize) -> Result<(String, Vec<ReplicationRecord>)> {
    let mut lines = input.lines();
    let header = lines.next().ok_or(Error::Parse { line: 1, msg: "empty records file".into() })??;
    if header != records_header(kind, k_cap) {
        return Err(Error::Parse { line: 1, msg: "unexpected records header".into() });
    }
    let n_extra = extra_columns(kind).len();
    let mut hash = String::new();
    let mut out = Vec::new();
    for (i, l) in lines.enumerate() {
        let line_no = i + 2;
        let l = l?;
        let bad = |msg: String| Error::Parse { line: line_no, msg };
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != 9 + 2 * (k_cap + 1) + n_extra {
            return Err(bad(format!("expected {} fields, got {}", 9 + 2 * (k_cap + 1) + n_extra, f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s}: {e}")));
        let int = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("{s}: {e}")));
        hash = f[0].to_string();
        let counts = f[9..10 + k_cap].iter().map(|s| int(s).map(|x| x as usize)).collect::<Result<_>>()?;
        let betti = f[10 + k_cap..11 + 2 * k_cap].iter().map(|s| int(s).map(|x| x as usize)).collect::<Result<_>>()?;
        out.push(ReplicationRecord {
            variant: variant_from(f[1]).map_err(|e| bad(e.to_string()))?,
            grid_index: int(f[2])? as usize,
            grid: num(f[3])?,
            replication: int(f[4])? as usize,
            seed: int(f[5])?,
            k: int(f[6])? as usize,
            value: num(f[7])?,
            chi: f[8].parse().map_err(|e| bad(format!("{}: {e}", f[8])))?,
            counts,
            betti,
            extras: f[11 + 2 * k_cap..].iter().map(|s| num(s)).collect::<Result<_>>()?,
        });
    }
    Ok((hash, out))
}

pub const SUMMARY_HEADER: &str = "config_hash,variant,grid_index,grid,k,count,mean,variance,std_err,variance_std_err,skewness,excess_kurtosis,ks,cv,tail_threshold,tail_frequency,envelope";

pub fn write_summary<W: Write>(mut out: W, hash: &str, kind: ExperimentKind, rows: &[SummaryRow]) -> Result<()> {
    let mut header = SUMMARY_HEADER.to_string();
    for c in extra_columns(kind) {
        write!(header, ",mean_{c}").unwrap();
    }
    writeln!(out, "{header}")?;
    for r in rows {
        write!(
            out,
            "{hash},{},{},{:?},{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            r.variant.name(),
            r.grid_index,
            r.grid,
            r.k,
            r.count,
            r.mean,
            r.variance,
            r.std_err,
            r.variance_std_err,
            r.skewness,
            r.excess_kurtosis,
            r.ks,
            r.cv,
            r.tail_threshold,
            r.tail_frequency,
            r.envelope
        )?;
        for x in &r.extras_mean {
            write!(out, ",{x:?}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Wall times live apart from the records so that records stay
/// byte-reproducible.
pub fn write_timings<W: Write>(mut out: W, hash: &str, output: &ExperimentOutput) -> Result<()> {
    writeln!(out, "config_hash,variant,grid_index,replication,seconds")?;
    for t in &output.timings {
        writeln!(out, "{hash},{},{},{},{:.6}", t.variant.name(), t.grid_index, t.replication, t.seconds)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ChecksFile<'a> {
    config_hash: &'a str,
    checks: &'a [super::summary::Check],
    calibration: &'a Option<super::stats::Calibration>,
    packing_bound: Option<usize>,
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    Ok(std::io::BufWriter::new(fs::File::create(path)?))
}

/// Write every artifact of a run into `dir` (created if missing). Nothing is
/// written outside `dir`.
pub fn write_outputs(dir: &Path, output: &ExperimentOutput, workers: usize, started: DateTime<Utc>) -> Result<RunManifest> {
    fs::create_dir_all(dir.join(PLOTS_DIR))?;
    let cfg = &output.config;
    let hash = &output.hash;
    let mut files: Vec<String> = Vec::new();
    let mut emit = |name: &str, f: &mut dyn FnMut(&mut dyn Write) -> Result<()>| -> Result<()> {
        let mut w = create(&dir.join(name))?;
        f(&mut w)?;
        w.flush()?;
        files.push(name.to_string());
        Ok(())
    };
    emit(CONFIG_FILE, &mut |w| Ok(w.write_all(cfg.source_text().as_bytes())?))?;
    emit(RECORDS_FILE, &mut |w| write_records(w, hash, cfg.kind, cfg.k_cap(), &output.records))?;
    emit(SUMMARY_FILE, &mut |w| write_summary(w, hash, cfg.kind, &output.summary))?;
    emit(TIMINGS_FILE, &mut |w| write_timings(w, hash, output))?;
    emit(CHECKS_FILE, &mut |w| {
        let body = ChecksFile {
            config_hash: hash,
            checks: &output.checks,
            calibration: &output.calibration,
            packing_bound: output.packing_bound,
        };
        serde_json::to_writer_pretty(&mut *w, &body)?;
        Ok(writeln!(w)?)
    })?;
    for (name, svg) in plots::render_all(output) {
        let rel = format!("{PLOTS_DIR}/{name}");
        emit(&rel, &mut |w| Ok(w.write_all(svg.as_bytes())?))?;
    }
    files.push(MANIFEST_FILE.to_string());
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        kind: cfg.kind,
        config_hash: hash.clone(),
        master_seed: cfg.seed,
        workers,
        started: started.to_rfc3339_opts(SecondsFormat::Millis, true),
        finished: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        files,
    };
    let mut w = create(&dir.join(MANIFEST_FILE))?;
    serde_json::to_writer_pretty(&mut w, &manifest)?;
    writeln!(w)?;
    w.flush()?;
    Ok(manifest)
}

/// Read `records.csv` from a run directory.
pub fn load_records(dir: &Path, kind: ExperimentKind, k_cap: usize) -> Result<(String, Vec<ReplicationRecord>)> {
    read_records(BufReader::new(fs::File::open(dir.join(RECORDS_FILE))?), kind, k_cap)
}

/// Default output directory for a config under `root`.
pub fn default_run_dir(root: &Path, kind: ExperimentKind, short_hash: &str) -> PathBuf {
    root.join(format!("{}-{short_hash}", kind.name()))
}
