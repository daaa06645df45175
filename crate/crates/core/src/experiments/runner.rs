use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind, Variant, WindowShape};
use super::stats::{calibrate_bands, Calibration, NormalityBands};
use super::summary::{derive_checks, summarize, Check, SummaryRow};
use crate::complex::{build_cech, count_simplices, count_with_vertex_in, restrict_to_vertices, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{build_neighbor_graph, vacant_component_count};
use crate::homology::{betti_numbers, BettiVector, UnionFind};
use crate::point_process::{
    sample_binomial, sample_coupled_poisson_binomial, sample_extended_binomial, sample_ginibre_capped,
    sample_homogeneous_poisson, sample_inhomogeneous_poisson, sample_poisson_on_sequence, DensitySpec, PointSample,
    Window, WindowSequence, DEFAULT_MAX_ORDER,
};
use crate::rng::{derive_path, stream};
use crate::stabilization::packing_lower_bound;

/// Outputs of one replication for one k (or one simplex dimension j for the
/// simplex law).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub variant: Variant,
    pub grid_index: usize,
    pub grid: f64,
    pub replication: usize,
    pub seed: u64,
    pub k: usize,
    /// The observable summarized for this experiment kind.
    pub value: f64,
    pub counts: Vec<usize>,
    /// Homology of the stored skeleton in every dimension up to the cap.
    pub betti: Vec<usize>,
    pub chi: i64,
    pub extras: Vec<f64>,
}

impl ReplicationRecord {
    /// χ by faces equals the alternating Betti sum.
    pub fn euler_consistent(&self) -> bool {
        let alt: i64 = self.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        alt == self.chi
    }
}

/// Names of the kind-specific extra columns, in record order.
pub fn extra_columns(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::StrongLaw | ExperimentKind::VarianceScaling | ExperimentKind::Clt | ExperimentKind::Concentration => {
            &["beta", "points"]
        }
        ExperimentKind::SimplexLaw => &["s_window", "s_marked", "s_enlarged", "s_weighted", "sandwich_ok", "points"],
        ExperimentKind::Coupling => &["delta", "majorant", "dominates", "points_poisson", "points_binomial"],
        ExperimentKind::DppConcentration => &["lipschitz_min", "lipschitz_max", "lipschitz_ok", "points"],
        ExperimentKind::DualityAudit => &["bounded", "bounded_refined", "agree", "agree_refined", "points"],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub variant: Variant,
    pub grid_index: usize,
    pub replication: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub hash: String,
    pub records: Vec<ReplicationRecord>,
    pub timings: Vec<Timing>,
    pub summary: Vec<SummaryRow>,
    pub checks: Vec<Check>,
    pub calibration: Option<Calibration>,
    pub packing_bound: Option<usize>,
}

impl ExperimentOutput {
    pub fn rows(&self, variant: Variant, k: usize) -> Vec<&SummaryRow> {
        self.summary.iter().filter(|r| r.variant == variant && r.k == k).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn variant_label(v: Variant) -> u64 {
    match v {
        Variant::Poisson => stream::VARIANT_POISSON,
        Variant::Binomial => stream::VARIANT_BINOMIAL,
        Variant::Ginibre => stream::VARIANT_GINIBRE,
        Variant::Coupled => stream::VARIANT_COUPLED,
    }
}

/// Seed of one replication: a pure function of the master seed, variant,
/// grid index and replication index.
pub fn replication_seed(master: u64, variant: Variant, grid_index: usize, rep: usize) -> u64 {
    derive_path(master, &[stream::REPLICATION, variant_label(variant), grid_index as u64, rep as u64])
}

struct Job {
    variant: Variant,
    grid_index: usize,
    rep: usize,
}

/// Run an experiment on `workers` threads. Outputs do not depend on the
/// worker count.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let packing_bound = match cfg.kind {
        ExperimentKind::DppConcentration => Some(packing_lower_bound(2, cfg.seed, 200)?.count),
        _ => None,
    };
    let jobs: Vec<Job> = cfg
        .variants()
        .into_iter()
        .flat_map(|variant| {
            (0..cfg.grid.len()).flat_map(move |grid_index| {
                (0..cfg.replications).map(move |rep| Job { variant, grid_index, rep })
            })
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let ctx = Context { cfg, packing_bound: packing_bound.unwrap_or(0) };
    let results: Vec<Result<(Vec<ReplicationRecord>, f64)>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let start = Instant::now();
                let recs = ctx.replicate(job)?;
                Ok((recs, start.elapsed().as_secs_f64()))
            })
            .collect()
    });
    let mut records = Vec::new();
    let mut timings = Vec::with_capacity(jobs.len());
    for (job, res) in jobs.iter().zip(results) {
        let (recs, seconds) = res?;
        records.extend(recs);
        timings.push(Timing { variant: job.variant, grid_index: job.grid_index, replication: job.rep, seconds });
    }
    let summary = summarize(cfg, &records);
    let calibration = match cfg.kind {
        ExperimentKind::Clt => {
            let bands = NormalityBands::for_sample_size(cfg.replications);
            Some(calibrate_bands(cfg.replications, cfg.calibration_trials.unwrap_or(2000), &bands, cfg.seed))
        }
        _ => None,
    };
    let checks = derive_checks(cfg, &summary, &records, calibration.as_ref(), packing_bound);
    Ok(ExperimentOutput { config: cfg.clone(), hash: cfg.hash(), records, timings, summary, checks, calibration, packing_bound })
}

/// Dispatch helpers named after the experiment kinds; each insists on the
/// matching `kind` field.
macro_rules! kind_runner {
    ($name:ident, $kind:ident) => {
        pub fn $name(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentOutput> {
            if cfg.kind != ExperimentKind::$kind {
                return Err(Error::Config {
                    line: None,
                    msg: format!("expected kind {}, got {}", ExperimentKind::$kind.name(), cfg.kind.name()),
                });
            }
            run_experiment(cfg, workers)
        }
    };
}

kind_runner!(run_strong_law, StrongLaw);
kind_runner!(run_simplex_law, SimplexLaw);
kind_runner!(run_variance_scaling, VarianceScaling);
kind_runner!(run_clt, Clt);
kind_runner!(run_concentration, Concentration);
kind_runner!(run_coupling, Coupling);
kind_runner!(run_dpp_concentration, DppConcentration);
kind_runner!(run_duality_audit, DualityAudit);

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    packing_bound: usize,
}

impl Context<'_> {
    fn replicate(&self, job: &Job) -> Result<Vec<ReplicationRecord>> {
        let cfg = self.cfg;
        let g = cfg.grid[job.grid_index];
        let seed = replication_seed(cfg.seed, job.variant, job.grid_index, job.rep);
        let r = cfg.radius_at(g);
        let record = |k: usize, value: f64, b: &BettiVector, extras: Vec<f64>| ReplicationRecord {
            variant: job.variant,
            grid_index: job.grid_index,
            grid: g,
            replication: job.rep,
            seed,
            k,
            value,
            counts: b.counts.0.clone(),
            betti: b.as_is.clone(),
            chi: b.euler,
            extras,
        };
        match cfg.kind {
            ExperimentKind::StrongLaw
            | ExperimentKind::VarianceScaling
            | ExperimentKind::Clt
            | ExperimentKind::Concentration => {
                let s = self.sample(job.variant, g, seed)?;
                let b = betti_numbers(&build_cech(&s, r, cfg.k_cap())?, cfg.field);
                let scale = if cfg.kind == ExperimentKind::StrongLaw { g.powi(cfg.dim as i32) } else { 1.0 };
                Ok(cfg
                    .k
                    .iter()
                    .map(|&k| {
                        let beta = b.as_is[k] as f64;
                        record(k, beta / scale, &b, vec![beta, s.len() as f64])
                    })
                    .collect())
            }
            ExperimentKind::SimplexLaw => self.simplex_law(job, g, seed, r, &record),
            ExperimentKind::Coupling => {
                let f = self.density();
                let (p, x) = sample_coupled_poisson_binomial(g as usize, &f, seed)?;
                let (small, big) = if p.len() <= x.len() { (&p, &x) } else { (&x, &p) };
                let cb = build_cech(big, r, cfg.k_cap())?;
                let keep: Vec<u32> = (0..small.len() as u32).collect();
                let cs = restrict_to_vertices(&cb, &keep);
                let (bb, bs) = (betti_numbers(&cb, cfg.field), betti_numbers(&cs, cfg.field));
                let (bp, bx) = if p.len() <= x.len() { (&bs, &bb) } else { (&bb, &bs) };
                // shared prefix: the symmetric difference is the tail of the longer sample
                let mark: Vec<bool> = (0..big.len()).map(|i| i >= small.len()).collect();
                let touched = count_with_vertex_in(&cb, &mark);
                Ok(cfg
                    .k
                    .iter()
                    .map(|&k| {
                        let delta = (bp.as_is[k] as i64 - bx.as_is[k] as i64).unsigned_abs() as f64;
                        let majorant = (touched.get(k) + touched.get(k + 1)) as f64;
                        let extras = vec![delta, majorant, f64::from(majorant >= delta), p.len() as f64, x.len() as f64];
                        record(k, delta / g, bp, extras)
                    })
                    .collect())
            }
            ExperimentKind::DppConcentration => {
                let s = self.sample(job.variant, g, seed)?;
                let c = build_cech(&s, r, cfg.k_cap())?;
                let b = betti_numbers(&c, cfg.field);
                let (lo, hi) = deletion_changes(&s, r)?;
                let ok = s.is_empty() || (hi <= 1 && lo >= -(self.packing_bound as i64));
                let extras = vec![lo as f64, hi as f64, f64::from(ok), s.len() as f64];
                Ok(vec![record(0, b.as_is[0] as f64, &b, extras)])
            }
            ExperimentKind::DualityAudit => {
                let w = Window::cube(2, g)?;
                let full = sample_homogeneous_poisson(cfg.intensity, &w, seed)?;
                // keep every ball at least r away from the flood-fill frame
                let s = full.restrict(&w.shrink(2.0 * r)?);
                let b = betti_numbers(&build_cech(&s, r, cfg.k_cap())?, cfg.field);
                let res = cfg.resolution() / r;
                let base = vacant_component_count(&s, r, &w, res)?.bounded;
                let refined = vacant_component_count(&s, r, &w, 2.0 * res)?.bounded;
                let beta = b.as_is[1];
                let extras = vec![
                    base as f64,
                    refined as f64,
                    f64::from(base == beta),
                    f64::from(refined == beta),
                    s.len() as f64,
                ];
                Ok(vec![record(1, beta as f64, &b, extras)])
            }
        }
    }

    fn density(&self) -> DensitySpec {
        match self.cfg.window {
            WindowShape::Cube => DensitySpec::unit_cube(self.cfg.dim),
            WindowShape::Ball => {
                let radius = (1.0 / crate::point_process::unit_ball_volume(self.cfg.dim)).powf(1.0 / self.cfg.dim as f64);
                DensitySpec::uniform(Window::ball(self.cfg.dim, radius).expect("positive radius"))
            }
        }
    }

    fn side_window(&self, l: f64) -> Result<Window> {
        let d = self.cfg.dim;
        match self.cfg.window {
            WindowShape::Cube => Window::cube(d, l),
            // ball with the volume of cube(l)
            WindowShape::Ball => {
                Window::ball(d, (l.powi(d as i32) / crate::point_process::unit_ball_volume(d)).powf(1.0 / d as f64))
            }
        }
    }

    fn sample(&self, variant: Variant, g: f64, seed: u64) -> Result<PointSample> {
        let cfg = self.cfg;
        let d = cfg.dim;
        match cfg.kind {
            ExperimentKind::Clt => {
                let seq = match cfg.window {
                    WindowShape::Cube => WindowSequence::Cubes { dim: d },
                    WindowShape::Ball => WindowSequence::Balls { dim: d },
                };
                let n = g.round() as u64;
                match variant {
                    Variant::Binomial => sample_extended_binomial(n, &seq, seed),
                    _ => sample_poisson_on_sequence(n, &seq, seed),
                }
            }
            ExperimentKind::VarianceScaling | ExperimentKind::Concentration => {
                let f = self.density();
                match variant {
                    Variant::Binomial => sample_binomial(g.round() as usize, &f, seed),
                    _ => sample_inhomogeneous_poisson(g, &f, seed),
                }
            }
            ExperimentKind::DppConcentration => {
                let w = Window::cube(2, g)?;
                match variant {
                    Variant::Ginibre => {
                        // the square fits in the ball of half the bulk radius,
                        // away from the spectral edge
                        let radius = 2.0 * g / std::f64::consts::SQRT_2;
                        let order = (std::f64::consts::PI * radius * radius).ceil() as usize;
                        let cap = cfg.max_order.unwrap_or(DEFAULT_MAX_ORDER);
                        Ok(sample_ginibre_capped(order, seed, cap)?.restrict(&w))
                    }
                    _ => sample_homogeneous_poisson(cfg.intensity, &w, seed),
                }
            }
            _ => {
                let w = self.side_window(g)?;
                match variant {
                    Variant::Binomial => {
                        let n = (cfg.intensity * w.volume()).round() as usize;
                        sample_binomial(n, &DensitySpec::uniform(w), seed)
                    }
                    _ => sample_homogeneous_poisson(cfg.intensity, &w, seed),
                }
            }
        }
    }

    fn simplex_law(
        &self,
        job: &Job,
        l: f64,
        seed: u64,
        r: f64,
        record: &dyn Fn(usize, f64, &BettiVector, Vec<f64>) -> ReplicationRecord,
    ) -> Result<Vec<ReplicationRecord>> {
        let cfg = self.cfg;
        let d = cfg.dim as i32;
        // every simplex with a vertex in W_l lies inside W_{l+4r}
        let outer = Window::cube(cfg.dim, l + 4.0 * r)?;
        let inner = Window::cube(cfg.dim, l)?;
        let big = match job.variant {
            Variant::Binomial => {
                let n = (cfg.intensity * outer.volume()).round() as usize;
                sample_binomial(n, &DensitySpec::uniform(outer.clone()), seed)?
            }
            _ => sample_homogeneous_poisson(cfg.intensity, &outer, seed)?,
        };
        let cap = cfg.k_cap();
        let c_big = build_cech(&big, r, cap)?;
        let mark: Vec<bool> = big.points().map(|p| inner.contains(p)).collect();
        let keep: Vec<u32> = (0..big.len() as u32).filter(|&i| mark[i as usize]).collect();
        let c_in = restrict_to_vertices(&c_big, &keep);
        let b = betti_numbers(&c_in, cfg.field);
        let s_enlarged = count_simplices(&c_big);
        let s_window = count_simplices(&c_in);
        let s_marked = count_with_vertex_in(&c_big, &mark);
        let weighted = weighted_counts(&c_big, &mark);
        let vol = l.powi(d);
        Ok((0..=cap)
            .map(|j| {
                let ok = s_window.get(j) <= s_marked.get(j) && s_marked.get(j) <= s_enlarged.get(j);
                let extras = vec![
                    s_window.get(j) as f64,
                    s_marked.get(j) as f64,
                    s_enlarged.get(j) as f64,
                    weighted[j] / vol,
                    f64::from(ok),
                    keep.len() as f64,
                ];
                record(j, s_window.get(j) as f64 / vol, &b, extras)
            })
            .collect())
    }
}

/// Σ over j-simplices of (vertices in the marked region)/(j+1): an
/// edge-effect-free estimate of the expected j-simplex count of the region.
fn weighted_counts(c: &SimplicialComplex, mark: &[bool]) -> Vec<f64> {
    (0..=c.k_cap())
        .map(|j| {
            c.simplices(j)
                .iter()
                .map(|s| s.iter().filter(|&&v| mark[v as usize]).count() as f64 / (j + 1) as f64)
                .sum()
        })
        .collect()
}

/// Range of β_0(X) − β_0(X∖{x}) over the points x of the sample.
fn deletion_changes(s: &PointSample, r: f64) -> Result<(i64, i64)> {
    let n = s.len();
    if n == 0 {
        return Ok((0, 0));
    }
    let g = build_neighbor_graph(s, 2.0 * r)?;
    let components = |skip: Option<usize>| {
        let mut uf = UnionFind::new(n);
        let mut merges = 0;
        for (a, b) in g.edges() {
            if skip == Some(a as usize) || skip == Some(b as usize) {
                continue;
            }
            merges += usize::from(uf.union(a as usize, b as usize));
        }
        n - usize::from(skip.is_some()) - merges
    };
    let all = components(None) as i64;
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for x in 0..n {
        let dx = all - components(Some(x)) as i64;
        lo = lo.min(dx);
        hi = hi.max(dx);
    }
    Ok((lo, hi))
}
