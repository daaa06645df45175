use std::collections::HashMap;

use super::sparse::{axpy, SparseCol};
use super::FieldSpec;
use crate::complex::{SimplexList, SimplicialComplex};
use crate::error::{Error, Result};

/// Matrix of ∂_k: column `j` is the boundary of the `j`-th k-simplex, rows are
/// (k−1)-simplices in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub field: FieldSpec,
    pub rows: usize,
    pub columns: Vec<SparseCol>,
}

impl BoundaryMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Whether `self ∘ next` is the zero matrix (`next` is ∂_{k+1}).
    pub fn composes_to_zero(&self, next: &BoundaryMatrix) -> bool {
        if next.rows != self.cols() || next.k != self.k + 1 {
            return false;
        }
        let f = self.field;
        let mut acc: SparseCol = Vec::new();
        let mut tmp = Vec::new();
        next.columns.iter().all(|col| {
            acc.clear();
            for &(i, c) in col {
                axpy(f, &acc, c, &self.columns[i as usize], &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
            acc.is_empty()
        })
    }
}

/// Signed boundary of `s` as a column over `faces`. Fails if a face is missing.
pub(crate) fn boundary_column(field: FieldSpec, s: &[u32], faces: &SimplexList, buf: &mut Vec<u32>) -> Option<SparseCol> {
    let mut col = Vec::with_capacity(s.len());
    for skip in 0..s.len() {
        buf.clear();
        buf.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
        let row = faces.index_of(buf)?;
        col.push((row as u32, field.sign(skip)));
    }
    col.sort_unstable_by_key(|e| e.0);
    Some(col)
}

pub fn boundary_matrix(c: &SimplicialComplex, k: usize, field: FieldSpec) -> Result<BoundaryMatrix> {
    if k == 0 || k > c.k_cap() {
        return Err(Error::invalid(format!("boundary dimension {k} outside 1..={}", c.k_cap())));
    }
    let faces = c.simplices(k - 1);
    let mut buf = Vec::new();
    let columns = c
        .simplices(k)
        .iter()
        .map(|s| {
            boundary_column(field, s, faces, &mut buf)
                .ok_or_else(|| Error::Precondition(format!("complex not closed under faces at {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = BoundaryMatrix { k, field, rows: faces.len(), columns };
    debug_assert!(k < 2 || chain_identity_holds(c, k, field), "∂∂ ≠ 0 at dimension {k}");
    Ok(m)
}

/// Direct check that ∂_{k−1} ∂_k vanishes, accumulating codimension-two faces.
pub(crate) fn chain_identity_holds(c: &SimplicialComplex, k: usize, field: FieldSpec) -> bool {
    let mut acc: HashMap<Vec<u32>, u32> = HashMap::new();
    for s in c.simplices(k).iter() {
        acc.clear();
        for i in 0..s.len() {
            for j in 0..s.len() - 1 {
                let face: Vec<u32> = s.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &v)| v).collect();
                let sub: Vec<u32> = face.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v).collect();
                let e = acc.entry(sub).or_insert(0);
                *e = field.add(*e, field.mul(field.sign(i), field.sign(j)));
            }
        }
        if acc.values().any(|&v| v != 0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_simplex(n: u32) -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(n as usize, n as usize - 1, &[(0..n).collect()]).unwrap()
    }

    #[test]
    fn single_edge_column() {
        let c = SimplicialComplex::from_vertex_lists(2, 1, &[vec![0, 1]]).unwrap();
        let f = FieldSpec::new(5).unwrap();
        let m = boundary_matrix(&c, 1, f).unwrap();
        // [0,1] ↦ [1] − [0]
        assert_eq!(m.columns, vec![vec![(0, 4), (1, 1)]]);
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let c = full_simplex(5);
        for p in [2, 3, 7] {
            let f = FieldSpec::new(p).unwrap();
            for k in 1..4 {
                let a = boundary_matrix(&c, k, f).unwrap();
                let b = boundary_matrix(&c, k + 1, f).unwrap();
                assert!(a.composes_to_zero(&b));
                assert!(chain_identity_holds(&c, k + 1, f));
            }
        }
    }

    #[test]
    fn rejects_dimension_zero_and_above_cap() {
        let c = full_simplex(3);
        assert!(boundary_matrix(&c, 0, FieldSpec::GF2).is_err());
        assert!(boundary_matrix(&c, 3, FieldSpec::GF2).is_err());
    }
}
