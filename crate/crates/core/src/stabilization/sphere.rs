use std::io::Write;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::complex::build_cech;
use crate::error::{Error, Result};
use crate::geometry::dist2;
use crate::homology::{betti_numbers, FieldSpec};
use crate::point_process::PointSample;
use crate::rng::{derive_path, stream, stream_rng, Rng};

/// Radius of the sphere carrying the net, in units of r.
pub const NET_RADIUS: f64 = 1.5;
/// Thickening of the unit k-sphere that the balls must cover, in units of r.
pub const THICKENING: f64 = 0.1;
const MAX_REFINEMENTS: usize = 3;
const JITTERS_PER_LEVEL: usize = 20;
const BISECTION_LEVELS: usize = 10;
/// Jitters above r/4 would let a ball reach B_O(r/4).
const JITTER_CEILING: f64 = 0.25;

/// Points whose radius-r Čech complex is a k-sphere around the origin.
#[derive(Clone, Debug, Serialize)]
pub struct SphereConfiguration {
    pub k: usize,
    pub d: usize,
    pub r: f64,
    pub m: usize,
    pub epsilon: f64,
    /// Largest jitter (in units of r) under which every tested perturbation
    /// kept all invariants.
    pub c_star: f64,
    pub betti: Vec<usize>,
    pub points: Vec<Vec<f64>>,
}

impl SphereConfiguration {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header: Vec<String> = (0..self.d).map(|i| format!("x{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|c| format!("{c:?}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Manifest with k, d, r, m, ε and c_*.
    pub fn manifest_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Manifest {
            k: usize,
            d: usize,
            r: f64,
            m: usize,
            epsilon: f64,
            c_star: f64,
        }
        let m = Manifest { k: self.k, d: self.d, r: self.r, m: self.m, epsilon: self.epsilon, c_star: self.c_star };
        Ok(serde_json::to_string_pretty(&m)?)
    }
}

/// Result of checking the three invariants on one point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereCheck {
    pub avoids_inner_ball: bool,
    pub inside_outer_ball: bool,
    pub covers_thickening: bool,
    pub homology_matches: bool,
}

impl SphereCheck {
    pub fn all(&self) -> bool {
        self.avoids_inner_ball && self.inside_outer_ball && self.covers_thickening && self.homology_matches
    }
}

pub fn build_sphere_configuration(k: usize, d: usize, r: f64) -> Result<SphereConfiguration> {
    if k == 0 || k >= d || d > 3 {
        return Err(Error::invalid(format!("sphere configurations need 1 ≤ k < d ≤ 3, got k={k}, d={d}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    for level in 0..=MAX_REFINEMENTS {
        let points: Vec<Vec<f64>> = unit_net(k, d, level).into_iter().map(|p| scale(&p, r)).collect();
        let check = check_invariants(&points, k, r)?;
        if !check.all() {
            continue;
        }
        let betti = expected_betti(k, d);
        let c_star = jitter_bisection(&points, k, r)?;
        return Ok(SphereConfiguration { k, d, r, m: points.len(), epsilon: THICKENING * r, c_star, betti, points });
    }
    Err(Error::ConstructionFailed(format!("no sphere net for k={k}, d={d} after {MAX_REFINEMENTS} refinements")))
}

fn scale(p: &[f64], r: f64) -> Vec<f64> {
    p.iter().map(|c| c * r).collect()
}

fn expected_betti(k: usize, d: usize) -> Vec<usize> {
    (0..d).map(|j| usize::from(j == 0 || j == k)).collect()
}

/// Net on the sphere of radius 1.5 in the first k+1 coordinates. Level 0 uses
/// an angular step of π/4; each refinement halves it.
fn unit_net(k: usize, d: usize, level: usize) -> Vec<Vec<f64>> {
    let steps = 8usize << level;
    let mut out = Vec::new();
    let embed = |xs: &[f64]| -> Vec<f64> {
        let mut p = vec![0.0; d];
        p[..xs.len()].copy_from_slice(xs);
        p
    };
    match k {
        1 => {
            for i in 0..steps {
                let t = std::f64::consts::TAU * i as f64 / steps as f64;
                out.push(embed(&[NET_RADIUS * t.cos(), NET_RADIUS * t.sin()]));
            }
        }
        _ => {
            // latitude rings between the poles, with as many longitudes as keep
            // the spacing along the ring at most the spacing between rings
            let rings = steps / 2;
            out.push(embed(&[0.0, 0.0, NET_RADIUS]));
            for i in 1..rings {
                let polar = std::f64::consts::PI * i as f64 / rings as f64;
                let count = ((steps as f64) * polar.sin()).ceil().max(3.0) as usize;
                for j in 0..count {
                    let t = std::f64::consts::TAU * j as f64 / count as f64;
                    let rho = NET_RADIUS * polar.sin();
                    out.push(embed(&[rho * t.cos(), rho * t.sin(), NET_RADIUS * polar.cos()]));
                }
            }
            out.push(embed(&[0.0, 0.0, -NET_RADIUS]));
        }
    }
    out
}

/// Direct verification of the invariants at scale r.
pub fn check_invariants(points: &[Vec<f64>], k: usize, r: f64) -> Result<SphereCheck> {
    let d = points.first().map_or(0, Vec::len);
    let norms: Vec<f64> = points.iter().map(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt()).collect();
    let avoids_inner_ball = norms.iter().all(|&n| n - r >= 0.25 * r);
    let inside_outer_ball = norms.iter().all(|&n| n <= 2.0 * r);
    let covers_thickening = thickening_probes(k, d).iter().all(|y| {
        let y = scale(y, r);
        points.iter().any(|z| dist2(z, &y) <= r * r)
    });
    let s = PointSample::from_points(points)?;
    let c = build_cech(&s, r, d)?;
    let b = betti_numbers(&c, FieldSpec::GF2);
    let homology_matches = b.as_is[..d] == expected_betti(k, d)[..];
    Ok(SphereCheck { avoids_inner_ball, inside_outer_ball, covers_thickening, homology_matches })
}

/// Sample points of the ε-thickened unit k-sphere: a fine angular grid on
/// the sphere, each pushed by ±ε along every coordinate axis.
fn thickening_probes(k: usize, d: usize) -> Vec<Vec<f64>> {
    let mut base = Vec::new();
    let steps = 64;
    match k {
        1 => {
            for i in 0..steps {
                let t = std::f64::consts::TAU * i as f64 / steps as f64;
                let mut p = vec![0.0; d];
                p[0] = t.cos();
                p[1] = t.sin();
                base.push(p);
            }
        }
        _ => {
            for i in 0..=steps / 2 {
                let polar = std::f64::consts::PI * i as f64 / (steps / 2) as f64;
                for j in 0..steps {
                    let t = std::f64::consts::TAU * j as f64 / steps as f64;
                    base.push(vec![polar.sin() * t.cos(), polar.sin() * t.sin(), polar.cos()]);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(base.len() * (2 * d + 1));
    for p in base {
        for axis in 0..d {
            for sgn in [-1.0, 1.0] {
                let mut q = p.clone();
                q[axis] += sgn * THICKENING;
                out.push(q);
            }
        }
        out.push(p);
    }
    out
}

fn jitter(points: &[Vec<f64>], magnitude: f64, rng: &mut Rng) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            // uniform in the ball of radius `magnitude`
            let dir: Vec<f64> = (0..p.len()).map(|_| StandardNormal.sample(rng)).collect();
            let norm = dir.iter().map(|c: &f64| c * c).sum::<f64>().sqrt();
            let rad = magnitude * rng.gen::<f64>().powf(1.0 / p.len() as f64);
            p.iter().zip(&dir).map(|(c, u)| c + rad * u / norm).collect()
        })
        .collect()
}

/// Bisection for the largest jitter magnitude (units of r) under which 20
/// random perturbations per level all keep the invariants.
fn jitter_bisection(points: &[Vec<f64>], k: usize, r: f64) -> Result<f64> {
    let d = points[0].len();
    let (mut lo, mut hi) = (0.0, JITTER_CEILING);
    let passes = |c: f64, level: usize| -> Result<bool> {
        let mut rng = stream_rng(derive_path(k as u64, &[d as u64, level as u64]), stream::JITTER);
        for _ in 0..JITTERS_PER_LEVEL {
            if !check_invariants(&jitter(points, c * r, &mut rng), k, r)?.all() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if passes(hi, 0)? {
        return Ok(hi);
    }
    for level in 1..=BISECTION_LEVELS {
        let mid = 0.5 * (lo + hi);
        if passes(mid, level)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// The configuration translated to `center` and jittered by up to
/// `c_star·r` per point.
pub fn place_configuration(cfg: &SphereConfiguration, center: &[f64], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, stream::JITTER);
    jitter(&cfg.points, cfg.c_star * cfg.r, &mut rng)
        .into_iter()
        .map(|p| p.iter().zip(center).map(|(a, b)| a + b).collect())
        .collect()
}
