//! Command-line front end. `main` only forwards to [`run`].

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::complex::{build_cech, io as complex_io};
use crate::error::{Error, Result};
use crate::experiments::{default_run_dir, run_experiment, write_outputs, ExperimentConfig};
use crate::homology::{betti_numbers, BettiVector, FieldSpec};
use crate::point_process::{
    io as sample_io, sample_binomial, sample_extended_binomial, sample_ginibre, sample_homogeneous_poisson,
    DensitySpec, PointSample, Window, WindowSequence,
};

/// Environment variable naming the default output root.
pub const OUTPUT_ROOT_ENV: &str = "CECHKIT_OUTPUT_ROOT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cechkit", version, about = "Random Čech complexes, their homology, and limit-theorem experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a point sample and write it as CSV plus a JSON envelope.
    Sample(SampleArgs),
    /// Build C(X, r) for a point file and print its Betti vector.
    Betti(BettiArgs),
    /// Run an experiment described by a config file.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Process {
    Poisson,
    Binomial,
    ExtendedBinomial,
    Ginibre,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sequence {
    Cubes,
    Balls,
}

#[derive(clap::Args, Debug)]
struct SampleArgs {
    #[arg(long, value_enum)]
    process: Process,
    /// Intensity of the Poisson process.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Point count (binomial), sequence index (extended binomial) or matrix order (Ginibre).
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// `cube:<side>` or `ball:<radius>`, centered at the origin.
    #[arg(long)]
    window: Option<String>,
    #[arg(long, value_enum, default_value = "cubes")]
    sequence: Sequence,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (default: the output root).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base name of the written files.
    #[arg(long, default_value = "sample")]
    name: String,
}

#[derive(clap::Args, Debug)]
struct BettiArgs {
    /// Point file: CSV with an `x0,x1,...` header, or a `.json` envelope.
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
    #[arg(long, default_value_t = 2)]
    k_cap: usize,
    /// Field characteristic.
    #[arg(long, default_value_t = 2)]
    field: u32,
    /// Dimension assumed for an empty CSV.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Also write the complex, one simplex per line.
    #[arg(long)]
    dump_complex: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ExperimentArgs {
    config: PathBuf,
    /// Output directory (default: `<output root>/<kind>-<hash prefix>`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Exit with status 1 when a non-informational check fails.
    #[arg(long)]
    strict: bool,
}

fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn parse_window(spec: &str, dim: usize) -> Result<Window> {
    let (shape, size) = spec.split_once(':').ok_or_else(|| Error::invalid(format!("window {spec:?}: expected shape:size")))?;
    let size: f64 = size.parse().map_err(|_| Error::invalid(format!("window size {size:?} is not a number")))?;
    match shape {
        "cube" => Window::cube(dim, size),
        "ball" => Window::ball(dim, size),
        _ => Err(Error::invalid(format!("unknown window shape {shape:?}"))),
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("--{flag} is required for this process")))
}

fn cmd_sample(a: &SampleArgs, stdout: &mut dyn Write) -> Result<()> {
    let s = match a.process {
        Process::Poisson => {
            let w = parse_window(&required(a.window.clone(), "window")?, a.dim)?;
            sample_homogeneous_poisson(required(a.lambda, "lambda")?, &w, a.seed)?
        }
        Process::Binomial => {
            let w = parse_window(&required(a.window.clone(), "window")?, a.dim)?;
            sample_binomial(required(a.n, "n")? as usize, &DensitySpec::uniform(w), a.seed)?
        }
        Process::ExtendedBinomial => {
            let seq = match a.sequence {
                Sequence::Cubes => WindowSequence::Cubes { dim: a.dim },
                Sequence::Balls => WindowSequence::Balls { dim: a.dim },
            };
            sample_extended_binomial(required(a.n, "n")?, &seq, a.seed)?
        }
        Process::Ginibre => sample_ginibre(required(a.n, "n")? as usize, a.seed)?,
    };
    let dir = a.out.clone().unwrap_or_else(output_root);
    fs::create_dir_all(&dir)?;
    let csv = dir.join(format!("{}.csv", a.name));
    let json = dir.join(format!("{}.json", a.name));
    let mut w = std::io::BufWriter::new(fs::File::create(&csv)?);
    sample_io::write_csv(&s, &mut w)?;
    w.flush()?;
    let mut w = std::io::BufWriter::new(fs::File::create(&json)?);
    sample_io::write_json(&s, &mut w)?;
    writeln!(w)?;
    w.flush()?;
    writeln!(stdout, "{} points -> {}, {}", s.len(), csv.display(), json.display())?;
    Ok(())
}

fn read_points(path: &Path, dim: usize) -> Result<PointSample> {
    let file = fs::File::open(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        return sample_io::read_json(BufReader::new(file));
    }
    let (d, pts) = sample_io::read_csv_points(BufReader::new(file))?;
    if pts.is_empty() {
        return Ok(PointSample::empty(Window::unit_box(d.unwrap_or(dim))));
    }
    PointSample::from_points(&pts)
}

fn cmd_betti(a: &BettiArgs, stdout: &mut dyn Write) -> Result<()> {
    let field = FieldSpec::new(a.field)?;
    let s = read_points(&a.input, a.dim)?;
    let c = build_cech(&s, a.r, a.k_cap)?;
    let b = betti_numbers(&c, field);
    writeln!(stdout, "{}", BettiVector::csv_header(a.k_cap, "points"))?;
    writeln!(stdout, "{}", b.csv_row(s.seed(), s.len() as f64, a.r))?;
    if let Some(path) = &a.dump_complex {
        let mut w = std::io::BufWriter::new(fs::File::create(path)?);
        complex_io::write_text(&c, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

/// Returns whether every non-informational check passed.
fn cmd_experiment(a: &ExperimentArgs, stdout: &mut dyn Write) -> Result<bool> {
    let cfg = ExperimentConfig::from_path(&a.config).map_err(|e| match e {
        // a missing or unreadable config is a usage problem
        Error::Io(io) => Error::Config { line: None, msg: format!("{}: {io}", a.config.display()) },
        other => other,
    })?;
    let dir = a.out.clone().unwrap_or_else(|| default_run_dir(&output_root(), cfg.kind, &cfg.short_hash()));
    let started = chrono::Utc::now();
    let output = run_experiment(&cfg, a.workers)?;
    let manifest = write_outputs(&dir, &output, a.workers, started)?;
    writeln!(stdout, "{} {} -> {}", cfg.kind.name(), manifest.config_hash, dir.display())?;
    let mut ok = true;
    for c in &output.checks {
        let status = match (c.passed, c.informational) {
            (true, _) => "pass",
            (false, true) => "info",
            (false, false) => "FAIL",
        };
        ok &= c.passed || c.informational;
        writeln!(stdout, "  [{status}] {}: {}", c.name, c.detail)?;
    }
    Ok(ok)
}

/// Parse `args` (including the program name) and run; returns the exit
/// status. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Sample(a) => cmd_sample(a, stdout).map(|_| true),
        Command::Betti(a) => cmd_betti(a, stdout).map(|_| true),
        Command::Experiment(a) => cmd_experiment(a, stdout).map(|ok| ok || !a.strict),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_RUNTIME,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("cechkit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn window_specs() {
        assert_eq!(parse_window("cube:10", 2).unwrap().volume(), 100.0);
        assert!(parse_window("cube:-1", 2).is_err());
        assert!(parse_window("torus:1", 2).is_err());
        assert!(parse_window("cube", 2).is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["sample", "--process", "poisson"]).0, EXIT_USAGE);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let args = ["sample", "--process", "poisson", "--lambda", "-1", "--window", "cube:10", "--out", out];
        let (code, _, err) = call(&args);
        assert_eq!(code, EXIT_USAGE, "{err}");
        assert_eq!(call(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn sample_then_betti() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let args = ["sample", "--process", "poisson", "--lambda", "1", "--dim", "2", "--window", "cube:10", "--seed", "7", "--out", out];
        assert_eq!(call(&args).0, EXIT_OK);
        let csv = dir.path().join("sample.csv");
        let (code, text, _) = call(&["betti", csv.to_str().unwrap(), "--r", "0"]);
        assert_eq!(code, EXIT_OK);
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        // r = 0: every point is its own component
        assert_eq!(row[3], row[1]);
        assert_eq!(row[6], row[1]);
    }
}
