use serde::Serialize;

use super::basis::homology_basis;
use super::sparse::{rank_of_columns, SparseCol};
use super::{betti_numbers, FieldSpec};
use crate::complex::{complex_intersection, complex_union, count_simplices, SimplicialComplex};
use crate::error::{Error, Result};

/// Rank of the kernel of H_k(sub) → ⊕ H_k(sup_i) induced by inclusions.
pub fn induced_map_kernel_rank(
    sub: &SimplicialComplex,
    sups: &[&SimplicialComplex],
    k: usize,
    field: FieldSpec,
) -> Result<usize> {
    for (i, sup) in sups.iter().enumerate() {
        if !sub.is_subcomplex_of(sup) {
            return Err(Error::NotASubcomplex(format!("source is not contained in target {i}")));
        }
        if k > sup.k_cap() {
            return Err(Error::invalid(format!("target {i} stores no {k}-simplices")));
        }
    }
    let src = homology_basis(sub, k, field)?;
    if src.rank() == 0 {
        return Ok(0);
    }
    let mut columns: Vec<SparseCol> = vec![Vec::new(); src.rank()];
    let mut offset = 0u32;
    for sup in sups {
        let target = homology_basis(sup, k, field)?;
        let here = sup.simplices(k);
        for (col, z) in columns.iter_mut().zip(&src.representatives) {
            let mut image: SparseCol = z
                .iter()
                .map(|&(i, a)| (here.index_of(sub.simplices(k).get(i as usize)).unwrap() as u32, a))
                .collect();
            image.sort_unstable_by_key(|e| e.0);
            let coords = target.coordinates(&image)?;
            col.extend(coords.iter().enumerate().filter(|e| *e.1 != 0).map(|(h, &a)| (offset + h as u32, a)));
        }
        offset += target.rank() as u32;
    }
    Ok(src.rank() - rank_of_columns(field, &columns))
}

/// The five terms of the Mayer–Vietoris rank identity for `K1 ∪ K2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MayerVietorisTerms {
    pub k: usize,
    pub union: usize,
    pub first: usize,
    pub second: usize,
    pub intersection: usize,
    /// β(N_k), kernel of H_k(L) → H_k(K1) ⊕ H_k(K2).
    pub kernel_k: usize,
    /// β(N_{k−1}); zero for k = 0.
    pub kernel_below: usize,
}

impl MayerVietorisTerms {
    /// β_k(K1∪K2) = β_k(K1) + β_k(K2) + β(N_k) + β(N_{k−1}) − β_k(L)
    pub fn holds(&self) -> bool {
        self.union as i64
            == self.first as i64 + self.second as i64 + self.kernel_k as i64 + self.kernel_below as i64
                - self.intersection as i64
    }
}

/// Computes every term independently, as homology of the stored skeleta with
/// a common cap. Requires `k` below the cap so that (k+1)-simplices are
/// available to both pieces.
pub fn mayer_vietoris_terms(
    k1: &SimplicialComplex,
    k2: &SimplicialComplex,
    k: usize,
    field: FieldSpec,
) -> Result<MayerVietorisTerms> {
    let cap = k1.k_cap().max(k2.k_cap());
    let (a, b) = (k1.with_cap(cap), k2.with_cap(cap));
    if k > cap {
        return Err(Error::invalid(format!("dimension {k} above the cap {cap}")));
    }
    let union = complex_union(&a, &b)?;
    let inter = complex_intersection(&a, &b)?;
    let beta = |c: &SimplicialComplex| betti_numbers(c, field).as_is[k];
    let kernel_below = if k == 0 { 0 } else { induced_map_kernel_rank(&inter, &[&a, &b], k - 1, field)? };
    Ok(MayerVietorisTerms {
        k,
        union: beta(&union),
        first: beta(&a),
        second: beta(&b),
        intersection: beta(&inter),
        kernel_k: induced_map_kernel_rank(&inter, &[&a, &b], k, field)?,
        kernel_below,
    })
}

/// Outcome of comparing |Δβ_k| for nested complexes with the number of
/// k- and (k+1)-simplices in the difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiBoundCheck {
    pub delta: i64,
    pub bound: usize,
    pub slack: i64,
    pub holds: bool,
}

pub fn betti_difference_bound_check(
    inner: &SimplicialComplex,
    outer: &SimplicialComplex,
    k: usize,
    field: FieldSpec,
) -> Result<BettiBoundCheck> {
    let cap = inner.k_cap().max(outer.k_cap());
    let (a, b) = (inner.with_cap(cap), outer.with_cap(cap));
    if !a.is_subcomplex_of(&b) {
        return Err(Error::NotASubcomplex("inner complex is not contained in the outer one".into()));
    }
    if k > cap {
        return Err(Error::invalid(format!("dimension {k} above the cap {cap}")));
    }
    let (ca, cb) = (count_simplices(&a), count_simplices(&b));
    let diff = |j: usize| cb.get(j) - ca.get(j);
    let bound = diff(k) + if k < cap { diff(k + 1) } else { 0 };
    let delta = betti_numbers(&b, field).as_is[k] as i64 - betti_numbers(&a, field).as_is[k] as i64;
    let slack = bound as i64 - delta.abs();
    Ok(BettiBoundCheck { delta, bound, slack, holds: slack >= 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists(n: usize, cap: usize, l: &[Vec<u32>]) -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(n, cap, l).unwrap()
    }

    #[test]
    fn cone_kills_the_cycle() {
        let hollow = lists(3, 2, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        let full = lists(3, 2, &[vec![0, 1, 2]]);
        assert_eq!(induced_map_kernel_rank(&hollow, &[&full], 1, FieldSpec::GF2).unwrap(), 1);
        assert_eq!(induced_map_kernel_rank(&hollow, &[&hollow], 1, FieldSpec::GF2).unwrap(), 0);
    }

    #[test]
    fn components_merge() {
        let two = lists(2, 1, &[vec![0], vec![1]]);
        let edge = lists(2, 1, &[vec![0, 1]]);
        assert_eq!(induced_map_kernel_rank(&two, &[&edge], 0, FieldSpec::GF2).unwrap(), 1);
        assert!(matches!(
            induced_map_kernel_rank(&edge, &[&two], 0, FieldSpec::GF2),
            Err(Error::NotASubcomplex(_))
        ));
    }

    #[test]
    fn circle_from_two_arcs() {
        // two paths sharing their endpoints; intersection is two points
        let a = lists(4, 1, &[vec![0, 1], vec![1, 2]]);
        let b = lists(4, 1, &[vec![0, 3], vec![2, 3]]);
        for k in 0..=1 {
            let t = mayer_vietoris_terms(&a, &b, k, FieldSpec::GF2).unwrap();
            assert!(t.holds(), "{t:?}");
        }
        let t1 = mayer_vietoris_terms(&a, &b, 1, FieldSpec::GF2).unwrap();
        assert_eq!((t1.union, t1.kernel_below), (1, 1));
    }

    #[test]
    fn bound_on_single_simplex_addition() {
        let hollow = lists(3, 2, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        let full = lists(3, 2, &[vec![0, 1, 2]]);
        let same = betti_difference_bound_check(&hollow, &hollow, 1, FieldSpec::GF2).unwrap();
        assert_eq!((same.delta, same.bound, same.slack), (0, 0, 0));
        let add = betti_difference_bound_check(&hollow, &full, 1, FieldSpec::GF2).unwrap();
        assert_eq!((add.delta, add.bound), (-1, 1));
        let other = betti_difference_bound_check(&hollow, &full, 0, FieldSpec::GF2).unwrap();
        assert_eq!(other.delta, 0);
        assert!(betti_difference_bound_check(&full, &hollow, 1, FieldSpec::GF2).is_err());
    }
}
