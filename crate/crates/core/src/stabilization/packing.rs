use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::dist2;
use crate::rng::{stream, stream_rng};

/// Lower bound on the number of points in the closed ball B_O(2) at pairwise
/// distance above 2, witnessed by `centers`. Scaled by r, this is how many
/// components a single inserted point can merge.
#[derive(Clone, Debug, Serialize)]
pub struct PackingBound {
    pub d: usize,
    pub count: usize,
    pub centers: Vec<Vec<f64>>,
}

fn valid(centers: &[Vec<f64>]) -> bool {
    centers.iter().all(|c| dist2(c, &vec![0.0; c.len()]) <= 4.0 + 1e-12)
        && centers.iter().enumerate().all(|(i, a)| centers[i + 1..].iter().all(|b| dist2(a, b) > 4.0))
}

/// Known good arrangements on the sphere of radius 2.
fn seeds(d: usize) -> Vec<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    if d == 1 {
        out.push(vec![vec![-2.0], vec![2.0]]);
    }
    if d >= 2 {
        // regular pentagon: side 4 sin 36° ≈ 2.35
        out.push(
            (0..5)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / 5.0;
                    let mut p = vec![0.0; d];
                    p[0] = 2.0 * t.cos();
                    p[1] = 2.0 * t.sin();
                    p
                })
                .collect(),
        );
    }
    if d >= 3 {
        // icosahedron vertices: neighbouring angle ≈ 63.4°
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let norm = (1.0 + phi * phi).sqrt();
        let mut ico = Vec::new();
        for a in [-1.0, 1.0] {
            for b in [-phi, phi] {
                for perm in 0..3 {
                    let mut v = [0.0; 3];
                    v[(perm + 1) % 3] = a;
                    v[(perm + 2) % 3] = b;
                    let mut p = vec![0.0; d];
                    for i in 0..3 {
                        p[i] = 2.0 * v[i] / norm;
                    }
                    ico.push(p);
                }
            }
        }
        out.push(ico);
    }
    out
}

/// Lower bound for K_d from known arrangements and a seeded random greedy
/// search on the sphere of radius 2.
pub fn packing_lower_bound(d: usize, seed: u64, trials: usize) -> Result<PackingBound> {
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let mut best: Vec<Vec<f64>> = seeds(d).into_iter().filter(|s| valid(s)).max_by_key(Vec::len).unwrap_or_default();
    let mut rng = stream_rng(seed, stream::PACKING);
    for _ in 0..trials {
        let mut found: Vec<Vec<f64>> = Vec::new();
        for _ in 0..400 {
            let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = dir.iter().map(|c: &f64| c * c).sum::<f64>().sqrt();
            let rad = if rng.gen_bool(0.8) { 2.0 } else { 2.0 * rng.gen::<f64>().powf(1.0 / d as f64) };
            let p: Vec<f64> = dir.iter().map(|c| rad * c / norm).collect();
            if found.iter().all(|q| dist2(q, &p) > 4.0) {
                found.push(p);
            }
        }
        if found.len() > best.len() {
            best = found;
        }
    }
    debug_assert!(valid(&best));
    Ok(PackingBound { d, count: best.len(), centers: best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(packing_lower_bound(1, 0, 10).unwrap().count, 2);
        assert_eq!(packing_lower_bound(2, 0, 50).unwrap().count, 5);
        assert!(packing_lower_bound(3, 0, 20).unwrap().count >= 12);
    }

    #[test]
    fn witnesses_are_valid() {
        for d in 1..4 {
            assert!(valid(&packing_lower_bound(d, 9, 20).unwrap().centers));
        }
    }
}
