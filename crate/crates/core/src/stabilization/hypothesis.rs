use serde::Serialize;

use super::add_one::add_one_cost;
use super::sphere::{build_sphere_configuration, place_configuration};
use crate::error::{Error, Result};
use crate::geometry::dist2;
use crate::homology::FieldSpec;
use crate::point_process::{sample_inhomogeneous_poisson, unit_ball_volume, DensitySpec, PointSample};
use crate::rng::{derive_seed, stream};

/// Monte Carlo evidence for the variance lower-bound configuration: the mean
/// add-one cost at the center of a sphere configuration, and its behaviour
/// on the event that no sample point falls in B_x(2r_n).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub n: f64,
    pub k: usize,
    pub r: f64,
    pub r_n: f64,
    pub replications: usize,
    pub mean_cost: f64,
    pub std_err: f64,
    pub void_events: usize,
    pub void_frequency: f64,
    pub void_std_err: f64,
    /// exp(−f^* n ω_d (2r_n)^d), a lower bound for the void probability.
    pub void_lower_bound: f64,
    /// Void realizations on which D_x β_k > −1.
    pub conditional_violations: usize,
    /// For k = d−1, realizations on which D_x β_{d−1} > 0.
    pub sign_violations: usize,
}

impl HypothesisReport {
    /// |mean| exceeds `z` standard errors.
    pub fn mean_separated(&self, z: f64) -> bool {
        self.mean_cost.abs() > z * self.std_err
    }
}

/// `seeds` independent Poisson samples with intensity n·f, thermodynamic
/// radius r_n = (r/n)^{1/d}, probe point x at the center of the support.
pub fn variance_lowerbound_hypothesis_check(
    n: f64,
    f: &DensitySpec,
    k: usize,
    r: f64,
    master_seed: u64,
    replications: usize,
    field: FieldSpec,
) -> Result<HypothesisReport> {
    let d = f.support().dim();
    if replications < 2 {
        return Err(Error::invalid("need at least two replications"));
    }
    let r_n = (r / n).powf(1.0 / d as f64);
    let x = f.support().center();
    if f.support().distance_to_boundary(&x) < 3.0 * r_n {
        return Err(Error::Precondition(format!("B_x(3r_n) with r_n = {r_n} leaves the support")));
    }
    let cfg = build_sphere_configuration(k, d, r_n)?;
    let reach = 4.0 * r_n * r_n;

    let mut costs = Vec::with_capacity(replications);
    let (mut voids, mut cond_bad, mut sign_bad) = (0, 0, 0);
    for rep in 0..replications as u64 {
        let seed = derive_seed(master_seed, rep);
        let p = sample_inhomogeneous_poisson(n, f, seed)?;
        let void = p.points().all(|q| dist2(q, &x) > reach);
        let ys = place_configuration(&cfg, &x, derive_seed(seed, stream::JITTER));
        let mut coords = p.coords().to_vec();
        for y in &ys {
            coords.extend_from_slice(y);
        }
        let all = PointSample::from_parts(coords, p.window().clone(), seed, p.process().clone());
        let cost = add_one_cost(&all, &x, r_n, k, field)?.cost;
        if void {
            voids += 1;
            if cost > -1 {
                cond_bad += 1;
            }
        }
        if k + 1 == d && cost > 0 {
            sign_bad += 1;
        }
        costs.push(cost as f64);
    }
    let m = replications as f64;
    let mean = costs.iter().sum::<f64>() / m;
    let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let freq = voids as f64 / m;
    Ok(HypothesisReport {
        n,
        k,
        r,
        r_n,
        replications,
        mean_cost: mean,
        std_err: (var / m).sqrt(),
        void_events: voids,
        void_frequency: freq,
        void_std_err: (freq * (1.0 - freq) / m).sqrt(),
        void_lower_bound: (-f.upper_bound() * n * unit_ball_volume(d) * (2.0 * r_n).powi(d as i32)).exp(),
        conditional_violations: cond_bad,
        sign_violations: sign_bad,
    })
}
