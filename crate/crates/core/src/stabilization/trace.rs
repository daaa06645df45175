use std::io::Write;

use serde::Serialize;

use crate::complex::{build_cech_on, complex_intersection, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{betti_numbers, induced_map_kernel_rank, FieldSpec};
use crate::point_process::{sample_homogeneous_poisson, PointSample, Window};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub rho: f64,
    /// D_O β_k of the points within distance ρ of the origin.
    pub cost: i64,
    /// β(N_k) and β(N_{k−1}) of the gluing along 𝒦'' = C(B_O(2r) ∪ {O});
    /// present once ρ ≥ 2r.
    pub kernel_k: Option<usize>,
    pub kernel_below: Option<usize>,
    /// Whether cost = β_k(𝒦'') + β(N_k) + β(N_{k−1}) − β_k(ℒ) at this step.
    pub decomposition_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizationTrace {
    pub seed: u64,
    pub k: usize,
    pub r: f64,
    pub steps: Vec<TraceStep>,
    pub terminal: i64,
    /// Smallest ρ from which the cost stays constant to the end of the trace.
    pub r_hat: f64,
    /// False when the cost only settles at the last radius.
    pub stabilized: bool,
}

impl StabilizationTrace {
    pub fn radii(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.rho).collect()
    }

    pub fn costs(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.cost).collect()
    }

    /// β(N_k^ρ) is nondecreasing in ρ over the steps where it is defined.
    pub fn kernel_monotone(&self) -> bool {
        let ks: Vec<usize> = self.steps.iter().filter_map(|s| s.kernel_k).collect();
        ks.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn decompositions_hold(&self) -> bool {
        self.steps.iter().all(|s| s.decomposition_holds != Some(false))
    }

    pub const CSV_HEADER: &'static str = "seed,rho,cost,kernel_k,kernel_below";

    pub fn write_csv_rows<W: Write>(&self, mut out: W) -> Result<()> {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        for s in &self.steps {
            writeln!(out, "{},{},{},{},{}", self.seed, s.rho, s.cost, opt(s.kernel_k), opt(s.kernel_below))?;
        }
        Ok(())
    }
}

/// Trace of D_O β_k over growing balls B_O(ρ), using one homogeneous Poisson
/// sample on B_O(max ρ) restricted to each ball.
pub fn weak_stabilization_trace(
    seed: u64,
    lambda: f64,
    r: f64,
    k: usize,
    rhos: &[f64],
    field: FieldSpec,
    dim: usize,
) -> Result<StabilizationTrace> {
    let max_rho = *rhos.last().ok_or_else(|| Error::invalid("empty radius list"))?;
    let s = sample_homogeneous_poisson(lambda, &Window::ball(dim, max_rho)?, seed)?;
    weak_trace_for_sample(&s, r, k, rhos, field)
}

/// Same as [`weak_stabilization_trace`] for a given configuration.
pub fn weak_trace_for_sample(
    s: &PointSample,
    r: f64,
    k: usize,
    rhos: &[f64],
    field: FieldSpec,
) -> Result<StabilizationTrace> {
    if rhos.is_empty() || rhos.windows(2).any(|w| w[0] >= w[1]) || rhos[0] <= 0.0 {
        return Err(Error::invalid("radii must be positive and strictly increasing"));
    }
    let d = s.dim();
    let origin = vec![0.0; d];
    if s.points().any(|p| p == origin.as_slice()) {
        return Err(Error::invalid("the origin is already a sample point"));
    }
    let n = s.len();
    let with_o = s.with_point(&origin);
    let o = n as u32;
    let cap = k + 1;
    let norm2: Vec<f64> = s.points().map(|p| p.iter().map(|c| c * c).sum()).collect();
    let within = |rho: f64| -> Vec<u32> { (0..n as u32).filter(|&i| norm2[i as usize] <= rho * rho).collect() };
    let beta = |c: &SimplicialComplex| betti_numbers(c, field).as_is[k] as i64;

    let mut near = within(2.0 * r);
    near.push(o);
    let k2 = build_cech_on(&with_o, &near, n + 1, r, cap)?;
    let beta_k2 = beta(&k2);

    let mut steps = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let inside = within(rho);
        let k1 = build_cech_on(&with_o, &inside, n + 1, r, cap)?;
        let mut inside_o = inside.clone();
        inside_o.push(o);
        let union = build_cech_on(&with_o, &inside_o, n + 1, r, cap)?;
        let cost = beta(&union) - beta(&k1);
        let mut step = TraceStep { rho, cost, kernel_k: None, kernel_below: None, decomposition_holds: None };
        if rho >= 2.0 * r {
            let l = complex_intersection(&k1, &k2)?;
            let nk = induced_map_kernel_rank(&l, &[&k1, &k2], k, field)?;
            let nb = if k == 0 { 0 } else { induced_map_kernel_rank(&l, &[&k1, &k2], k - 1, field)? };
            step.kernel_k = Some(nk);
            step.kernel_below = Some(nb);
            step.decomposition_holds = Some(cost == beta_k2 + nk as i64 + nb as i64 - beta(&l));
        }
        steps.push(step);
    }

    let costs: Vec<i64> = steps.iter().map(|s| s.cost).collect();
    let terminal = *costs.last().unwrap();
    let settle = costs.iter().rposition(|&c| c != terminal).map_or(0, |i| i + 1);
    Ok(StabilizationTrace {
        seed: s.seed(),
        k,
        r,
        r_hat: rhos[settle],
        stabilized: settle + 1 < rhos.len(),
        terminal,
        steps,
    })
}
