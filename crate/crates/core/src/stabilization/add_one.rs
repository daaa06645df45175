use serde::Serialize;

use crate::complex::{build_cech, build_cech_on, SimplexList, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::dist2;
use crate::homology::{betti_numbers, boundary_column, ColumnReducer, FieldSpec, SparseCol};
use crate::point_process::PointSample;

/// Change of β_k when the point `location` is inserted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AddOneCostRecord {
    pub location: Vec<f64>,
    pub k: usize,
    pub r: f64,
    pub cost: i64,
    /// Points of the enlarged configuration (the new point included) in the
    /// closed ball of radius 2r around it.
    pub local_count: usize,
}

impl AddOneCostRecord {
    /// 2·N^{k+1}: the number of k- and (k+1)-simplices through the new point
    /// is at most N^k + N^{k+1}.
    pub fn bound(&self) -> f64 {
        2.0 * (self.local_count as f64).powi(self.k as i32 + 1)
    }

    pub fn within_bound(&self) -> bool {
        (self.cost.unsigned_abs() as f64) <= self.bound()
    }
}

/// Reduction state of C(s, r) in dimensions k and k+1, reusable for many
/// insertion probes. Each probe appends the star of the new point to copies
/// of the stored reductions.
pub struct AddOneCost {
    sample: PointSample,
    r: f64,
    k: usize,
    field: FieldSpec,
    base: SimplicialComplex,
    red_k: Option<ColumnReducer>,
    red_k1: ColumnReducer,
}

impl AddOneCost {
    pub fn new(s: &PointSample, r: f64, k: usize, field: FieldSpec) -> Result<Self> {
        let base = build_cech(s, r, k + 1)?;
        let mut buf = Vec::new();
        let mut reduce = |j: usize| {
            let mut red = ColumnReducer::new(field, false);
            for sx in base.simplices(j).iter() {
                red.push(boundary_column(field, sx, base.simplices(j - 1), &mut buf).expect("closed complex"));
            }
            red
        };
        let red_k = (k >= 1).then(|| reduce(k));
        let red_k1 = reduce(k + 1);
        Ok(AddOneCost { sample: s.clone(), r, k, field, base, red_k, red_k1 })
    }

    pub fn cost(&self, x: &[f64]) -> Result<AddOneCostRecord> {
        let s = &self.sample;
        if x.len() != s.dim() {
            return Err(Error::invalid(format!("point of dimension {} in a {}-dimensional sample", x.len(), s.dim())));
        }
        if s.points().any(|p| p == x) {
            return Err(Error::invalid("inserted point coincides with a sample point"));
        }
        let (k, r, f) = (self.k, self.r, self.field);
        let n = s.len() as u32;
        let reach = 4.0 * r * r;
        let near: Vec<usize> = (0..s.len()).filter(|&i| dist2(s.point(i), x) <= reach).collect();

        // star of x: simplices of the local complex through x, relabelled so
        // that x becomes vertex n
        let local = s.subset(&near).with_point(x);
        let all_local: Vec<u32> = (0..local.len() as u32).collect();
        let local_c = build_cech_on(&local, &all_local, local.len(), r, k + 1)?;
        let x_local = near.len() as u32;
        let labels: Vec<u32> = near.iter().map(|&i| i as u32).chain([n]).collect();
        let star: Vec<SimplexList> = (0..=k + 1)
            .map(|j| {
                let rows: Vec<Vec<u32>> = local_c
                    .simplices(j)
                    .iter()
                    .filter(|sx| *sx.last().unwrap() == x_local)
                    .map(|sx| sx.iter().map(|&v| labels[v as usize]).collect())
                    .collect();
                SimplexList::from_rows(j + 1, rows)
            })
            .collect();

        let mut buf = Vec::new();
        let column = |sx: &[u32], j: usize, buf: &mut Vec<u32>| -> SparseCol {
            let old = self.base.simplices(j - 1);
            let mut col: SparseCol = (0..sx.len())
                .map(|skip| {
                    buf.clear();
                    buf.extend(sx.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    let row = if buf.last() == Some(&n) {
                        old.len() + star[j - 1].index_of(buf).expect("star closed under faces")
                    } else {
                        old.index_of(buf).expect("face of a Čech simplex is a Čech simplex")
                    };
                    (row as u32, f.sign(skip))
                })
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            col
        };

        let mut delta_rank = 0i64;
        if let Some(red) = &self.red_k {
            let mut red = red.clone();
            let before = red.rank();
            for sx in star[k].iter() {
                red.push(column(sx, k, &mut buf));
            }
            delta_rank += (red.rank() - before) as i64;
        }
        let mut red = self.red_k1.clone();
        let before = red.rank();
        for sx in star[k + 1].iter() {
            red.push(column(sx, k + 1, &mut buf));
        }
        delta_rank += (red.rank() - before) as i64;
        let cost = star[k].len() as i64 - delta_rank;

        debug_assert_eq!(cost, self.from_scratch(x)?, "incremental add-one cost disagrees");
        Ok(AddOneCostRecord { location: x.to_vec(), k, r, cost, local_count: near.len() + 1 })
    }

    fn from_scratch(&self, x: &[f64]) -> Result<i64> {
        let bigger = build_cech(&self.sample.with_point(x), self.r, self.k + 1)?;
        let after = betti_numbers(&bigger, self.field).as_is[self.k] as i64;
        let before = betti_numbers(&self.base, self.field).as_is[self.k] as i64;
        Ok(after - before)
    }
}

/// D_x β_k(s) = β_k(C(s ∪ {x}, r)) − β_k(C(s, r)).
pub fn add_one_cost(s: &PointSample, x: &[f64], r: f64, k: usize, field: FieldSpec) -> Result<AddOneCostRecord> {
    AddOneCost::new(s, r, k, field)?.cost(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_process::{sample_homogeneous_poisson, Window};
    use rand::{Rng, SeedableRng};

    fn circle(m: usize, radius: f64) -> Vec<Vec<f64>> {
        (0..m)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / m as f64;
                vec![radius * t.cos(), radius * t.sin()]
            })
            .collect()
    }

    #[test]
    fn empty_sample() {
        let s = PointSample::empty(Window::cube(2, 4.0).unwrap());
        let c0 = add_one_cost(&s, &[0.0, 0.0], 1.0, 0, FieldSpec::GF2).unwrap();
        assert_eq!((c0.cost, c0.local_count), (1, 1));
        assert_eq!(add_one_cost(&s, &[0.0, 0.0], 1.0, 1, FieldSpec::GF2).unwrap().cost, 0);
    }

    #[test]
    fn closing_the_circle() {
        let pts = circle(8, 1.5);
        let s = PointSample::from_points(&pts[..7]).unwrap();
        let rec = add_one_cost(&s, &pts[7], 1.0, 1, FieldSpec::GF2).unwrap();
        assert_eq!(rec.cost, 1);
        assert_eq!(add_one_cost(&s, &pts[7], 1.0, 0, FieldSpec::GF2).unwrap().cost, 0);
    }

    #[test]
    fn coning_a_hollow_triangle() {
        let pts = circle(3, 1.0);
        let s = PointSample::from_points(&pts).unwrap();
        // side √3 gives edges at r = 0.9 but the circumradius 1 blocks the triangle
        let rec = add_one_cost(&s, &[0.0, 0.0], 0.9, 1, FieldSpec::GF2).unwrap();
        assert_eq!(rec.cost, -1);
        assert!(rec.within_bound());
    }

    #[test]
    fn duplicate_rejected() {
        let s = PointSample::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(add_one_cost(&s, &[1.0, 0.0], 0.5, 0, FieldSpec::GF2).is_err());
    }

    #[test]
    fn reuse_across_probes_matches_bound() {
        let w = Window::cube(2, 6.0).unwrap();
        let s = sample_homogeneous_poisson(2.0, &w, 5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for k in 0..2 {
            let ctx = AddOneCost::new(&s, 0.45, k, FieldSpec::GF2).unwrap();
            for _ in 0..20 {
                let x = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
                let rec = ctx.cost(&x).unwrap();
                assert!(rec.within_bound(), "{rec:?}");
            }
        }
    }
}
