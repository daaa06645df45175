use std::collections::VecDeque;

use serde::Serialize;

use super::add_one::AddOneCost;
use crate::error::{Error, Result};
use crate::geometry::build_neighbor_graph;
use crate::homology::FieldSpec;
use crate::point_process::{sample_homogeneous_poisson, PointSample, Window};
use crate::rng::{derive_path, stream};

/// Largest r (at intensity 1) treated as subcritical by default: the
/// occupied Boolean model is far from percolating there.
pub fn default_subcritical_radius(dim: usize) -> Option<f64> {
    match dim {
        1 => Some(f64::INFINITY),
        2 => Some(0.5),
        3 => Some(0.35),
        _ => None,
    }
}

/// Default classification at intensity λ, using the scaling r·λ^{1/d}.
pub fn is_subcritical_default(dim: usize, lambda: f64, r: f64) -> bool {
    default_subcritical_radius(dim).is_some_and(|rc| r * lambda.powf(1.0 / dim as f64) <= rc)
}

/// A Poisson configuration restricted to B_O(S), where S is far enough out
/// that no point set outside B_O(S) can reach the clusters touching B_O(r).
pub struct StrongProbe {
    pub seed: u64,
    pub r: f64,
    pub k: usize,
    pub s_radius: f64,
    pub cluster_points: usize,
    pub base_cost: i64,
    inner: PointSample,
    field: FieldSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeOutcome {
    pub s_radius: f64,
    pub base_cost: i64,
    pub costs: Vec<i64>,
    pub agree: bool,
}

const MAX_WINDOW_DOUBLINGS: u64 = 6;

impl StrongProbe {
    pub fn prepare(
        seed: u64,
        lambda: f64,
        r: f64,
        k: usize,
        field: FieldSpec,
        dim: usize,
        subcritical: bool,
    ) -> Result<Self> {
        if !subcritical {
            return Err(Error::Precondition(
                "strong stabilization probes are only defined for subcritical radii".into(),
            ));
        }
        let mut window_radius = 16.0 * r;
        for attempt in 0..=MAX_WINDOW_DOUBLINGS {
            let sample_seed = if attempt == 0 { seed } else { derive_path(seed, &[stream::PROBE, attempt]) };
            let s = sample_homogeneous_poisson(lambda, &Window::ball(dim, window_radius)?, sample_seed)?;
            let reach = cluster_reach(&s, r)?;
            if let Some((extent, count)) = reach {
                if extent + 4.0 * r > window_radius {
                    window_radius *= 2.0;
                    continue;
                }
                return Self::finish(seed, s, r, k, field, extent + 3.0 * r, count);
            }
            return Self::finish(seed, s, r, k, field, 3.0 * r, 0);
        }
        Err(Error::Precondition(format!(
            "clusters near the origin reach a window of radius {window_radius}; r = {r} looks supercritical"
        )))
    }

    fn finish(seed: u64, s: PointSample, r: f64, k: usize, field: FieldSpec, s_radius: f64, count: usize) -> Result<Self> {
        let d = s.dim();
        let ball = Window::ball(d, s_radius)?;
        let inner = s.restrict(&ball);
        let base_cost = AddOneCost::new(&inner, r, k, field)?.cost(&vec![0.0; d])?.cost;
        Ok(StrongProbe { seed, r, k, s_radius, cluster_points: count, base_cost, inner, field })
    }

    /// D_O β_k of the inner configuration together with `extra`, every point
    /// of which must lie outside the closed ball B_O(S).
    pub fn cost_with(&self, extra: &[Vec<f64>]) -> Result<i64> {
        let d = self.inner.dim();
        let mut coords = self.inner.clone();
        for x in extra {
            if x.len() != d {
                return Err(Error::invalid("adversarial point of the wrong dimension"));
            }
            let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm <= self.s_radius {
                return Err(Error::Precondition(format!(
                    "adversarial point at distance {norm} lies inside B_O({})",
                    self.s_radius
                )));
            }
            coords = coords.with_point(x);
        }
        Ok(AddOneCost::new(&coords, self.r, self.k, self.field)?.cost(&vec![0.0; d])?.cost)
    }

    pub fn probe(&self, sets: &[Vec<Vec<f64>>]) -> Result<ProbeOutcome> {
        let costs = sets.iter().map(|x| self.cost_with(x)).collect::<Result<Vec<_>>>()?;
        let agree = costs.iter().all(|&c| c == self.base_cost);
        Ok(ProbeOutcome { s_radius: self.s_radius, base_cost: self.base_cost, costs, agree })
    }
}

/// Farthest distance from the origin of a point in a 2r-component that has
/// a point within 2r of the origin, with the number of such points.
fn cluster_reach(s: &PointSample, r: f64) -> Result<Option<(f64, usize)>> {
    let g = build_neighbor_graph(s, 2.0 * r)?;
    let norm = |i: usize| s.point(i).iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut seen = vec![false; s.len()];
    let mut queue: VecDeque<usize> = (0..s.len()).filter(|&i| norm(i) <= 2.0 * r).collect();
    if queue.is_empty() {
        return Ok(None);
    }
    for &i in &queue {
        seen[i] = true;
    }
    let (mut extent, mut count) = (0.0f64, 0);
    while let Some(i) = queue.pop_front() {
        extent = extent.max(norm(i));
        count += 1;
        for &j in g.neighbors(i) {
            if !seen[j as usize] {
                seen[j as usize] = true;
                queue.push_back(j as usize);
            }
        }
    }
    Ok(Some((extent, count)))
}

pub fn strong_stabilization_probe(
    seed: u64,
    lambda: f64,
    r: f64,
    k: usize,
    adversarial_sets: &[Vec<Vec<f64>>],
    field: FieldSpec,
    dim: usize,
) -> Result<ProbeOutcome> {
    let subcritical = is_subcritical_default(dim, lambda, r);
    StrongProbe::prepare(seed, lambda, r, k, field, dim, subcritical)?.probe(adversarial_sets)
}

/// `m` points evenly spaced on a circle of the given radius in the first two
/// coordinates, rotated by `phase`.
pub fn adversarial_ring(dim: usize, radius: f64, m: usize, phase: f64) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| {
            let t = phase + std::f64::consts::TAU * i as f64 / m as f64;
            let mut p = vec![0.0; dim];
            p[0] = radius * t.cos();
            if dim > 1 {
                p[1] = radius * t.sin();
            }
            p
        })
        .collect()
}
