use serde::{Deserialize, Serialize};

use super::boundary::boundary_column;
use super::sparse::ColumnReducer;
use super::FieldSpec;
use crate::complex::{count_simplices, SimplexCounts, SimplicialComplex};

/// Betti numbers of a complex together with the boundary ranks and face
/// counts they were derived from.
///
/// `as_is` holds the homology of the stored skeleton for every dimension
/// `0..=k_cap`. When the complex is truncated the top entry ignores the
/// missing higher simplices, so only the first `reliable` entries are the
/// Betti numbers of the full complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    pub field: FieldSpec,
    pub as_is: Vec<usize>,
    pub reliable: usize,
    /// `ranks[k]` is rank ∂_k for `k = 0..=k_cap+1` (the ends are zero).
    pub ranks: Vec<usize>,
    pub counts: SimplexCounts,
    pub euler: i64,
}

impl BettiVector {
    /// Betti numbers valid for the full complex.
    pub fn betti(&self) -> &[usize] {
        &self.as_is[..self.reliable]
    }

    /// β_k, valid only for `k < reliable`.
    pub fn get(&self, k: usize) -> usize {
        assert!(k < self.reliable, "β_{k} not determined by this skeleton");
        self.as_is[k]
    }

    pub fn betti_alternating_sum(&self) -> i64 {
        self.as_is.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Euler characteristic by faces agrees with the alternating Betti sum.
    pub fn euler_consistent(&self) -> bool {
        self.euler == self.betti_alternating_sum()
    }

    pub fn csv_header(k_cap: usize, size_label: &str) -> String {
        let mut cols = vec!["seed".to_string(), size_label.to_string(), "r".to_string()];
        cols.extend((0..=k_cap).map(|j| format!("S_{j}")));
        cols.extend((0..=k_cap).map(|k| format!("beta_{k}")));
        cols.push("chi".into());
        cols.join(",")
    }

    /// One CSV row: seed, window size, radius, S_0.., β_0.., χ. Betti entries
    /// beyond the reliable prefix are left empty.
    pub fn csv_row(&self, seed: u64, size: f64, r: f64) -> String {
        let mut cols = vec![seed.to_string(), format!("{size}"), format!("{r}")];
        cols.extend(self.counts.0.iter().map(usize::to_string));
        cols.extend(
            self.as_is.iter().enumerate().map(|(k, b)| if k < self.reliable { b.to_string() } else { String::new() }),
        );
        cols.push(self.euler.to_string());
        cols.join(",")
    }
}

pub fn euler_characteristic(c: &SimplicialComplex) -> i64 {
    count_simplices(c).euler_characteristic()
}

pub fn betti_numbers(c: &SimplicialComplex, field: FieldSpec) -> BettiVector {
    let counts = count_simplices(c);
    let k_cap = c.k_cap();
    let ranks = boundary_ranks(c, field);
    let as_is: Vec<usize> = (0..=k_cap).map(|k| counts.get(k) - ranks[k] - ranks[k + 1]).collect();
    let reliable = if c.is_truncated() { k_cap } else { k_cap + 1 };
    let euler = counts.euler_characteristic();
    let bv = BettiVector { field, as_is, reliable, ranks, counts, euler };
    debug_assert!(bv.euler_consistent());
    bv
}

/// rank ∂_k for `k = 0..=k_cap+1`. ∂_1 uses union–find; higher dimensions
/// are reduced top-down, skipping columns cleared by the pivots of the
/// dimension above (a pivot row of ∂_{k+1} is a k-simplex whose boundary is
/// already spanned by earlier columns).
pub(crate) fn boundary_ranks(c: &SimplicialComplex, field: FieldSpec) -> Vec<usize> {
    let k_cap = c.k_cap();
    let mut ranks = vec![0; k_cap + 2];
    if k_cap >= 1 {
        ranks[1] = edge_rank(c);
    }
    let mut cleared: Option<ColumnReducer> = None;
    for k in (2..=k_cap).rev() {
        let faces = c.simplices(k - 1);
        let mut red = ColumnReducer::new(field, false);
        let mut buf = Vec::new();
        for (j, s) in c.simplices(k).iter().enumerate() {
            if cleared.as_ref().is_some_and(|above| above.is_pivot_row(j as u32)) {
                red.push_zero();
                continue;
            }
            let col = boundary_column(field, s, faces, &mut buf).expect("complex closed under faces");
            red.push(col);
        }
        ranks[k] = red.rank();
        cleared = Some(red);
    }
    ranks
}

/// rank ∂_1 = number of vertices minus number of components.
fn edge_rank(c: &SimplicialComplex) -> usize {
    let mut uf = UnionFind::new(c.vertex_count());
    c.simplices(1).iter().filter(|e| uf.union(e[0] as usize, e[1] as usize)).count()
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    /// Merge the classes of `a` and `b`; false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        true
    }
}
