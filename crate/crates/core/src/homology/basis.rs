use super::boundary::boundary_column;
use super::sparse::{axpy, rank_of_columns, ColumnReducer, SparseCol};
use super::FieldSpec;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Cycle representatives of a basis of H_k, as chains over the k-simplices of
/// the complex (indices into its lexicographic k-level).
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub k: usize,
    pub field: FieldSpec,
    pub representatives: Vec<SparseCol>,
    /// Column of the ∂_k reduction (a k-simplex index) each representative
    /// came from.
    pub provenance: Vec<usize>,
    echelon: Echelon,
}

/// Vectors with pairwise distinct lowest rows; each optionally tagged with the
/// homology class it represents (untagged entries are boundaries).
#[derive(Clone, Debug, Default)]
struct Echelon {
    by_low: Vec<Option<usize>>,
    entries: Vec<(SparseCol, Option<usize>)>,
}

impl Echelon {
    fn with_rows(rows: usize) -> Self {
        Echelon { by_low: vec![None; rows], entries: Vec::new() }
    }

    /// Reduce `v` in place; returns the accumulated class coordinates.
    fn reduce(&self, field: FieldSpec, v: &mut SparseCol, classes: usize) -> Vec<u32> {
        let mut coords = vec![0u32; classes];
        let mut tmp = Vec::new();
        while let Some(&(low, a)) = v.last() {
            let Some(e) = self.by_low[low as usize] else { break };
            let (w, class) = &self.entries[e];
            let b = w.last().unwrap().1;
            let c = field.mul(a, field.inv(b));
            axpy(field, v, field.neg(c), w, &mut tmp);
            std::mem::swap(v, &mut tmp);
            if let Some(h) = class {
                coords[*h] = field.add(coords[*h], c);
            }
        }
        coords
    }

    fn insert(&mut self, v: SparseCol, class: Option<usize>) {
        let low = v.last().expect("nonzero vector").0 as usize;
        debug_assert!(self.by_low[low].is_none());
        self.by_low[low] = Some(self.entries.len());
        self.entries.push((v, class));
    }
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of the cycle `z` in this basis. Errors when `z`
    /// is not a cycle of the complex.
    pub fn coordinates(&self, z: &SparseCol) -> Result<Vec<u32>> {
        let mut v = z.clone();
        let coords = self.echelon.reduce(self.field, &mut v, self.rank());
        if !v.is_empty() {
            return Err(Error::Precondition(format!("chain is not a {}-cycle", self.k)));
        }
        Ok(coords)
    }
}

pub fn homology_basis(c: &SimplicialComplex, k: usize, field: FieldSpec) -> Result<HomologyBasis> {
    if k > c.k_cap() {
        return Err(Error::invalid(format!("homology dimension {k} above the cap {}", c.k_cap())));
    }
    let n_k = c.count(k);
    let mut buf = Vec::new();

    // cycles Z_k with the simplex column each came from
    let mut cycles: Vec<(usize, SparseCol)> = Vec::new();
    if k == 0 {
        cycles.extend((0..n_k).map(|j| (j, vec![(j as u32, 1)])));
    } else {
        let faces = c.simplices(k - 1);
        let mut red = ColumnReducer::new(field, true);
        for s in c.simplices(k).iter() {
            red.push(boundary_column(field, s, faces, &mut buf).expect("closed complex"));
        }
        for j in 0..red.len() {
            if red.reduced(j).is_empty() {
                cycles.push((j, red.combo(j).clone()));
            }
        }
    }

    let mut echelon = Echelon::with_rows(n_k);
    if k < c.k_cap() {
        let mut red = ColumnReducer::new(field, false);
        for s in c.simplices(k + 1).iter() {
            red.push(boundary_column(field, s, c.simplices(k), &mut buf).expect("closed complex"));
        }
        for j in 0..red.len() {
            if !red.reduced(j).is_empty() {
                echelon.insert(red.reduced(j).clone(), None);
            }
        }
    }

    let mut representatives = Vec::new();
    let mut provenance = Vec::new();
    for (j, mut z) in cycles {
        echelon.reduce(field, &mut z, representatives.len());
        if !z.is_empty() {
            echelon.insert(z.clone(), Some(representatives.len()));
            representatives.push(z);
            provenance.push(j);
        }
    }
    Ok(HomologyBasis { k, field, representatives, provenance, echelon })
}

/// Checks that the representatives are cycles and independent modulo
/// boundaries, by an augmented-rank computation.
pub fn verify_basis(c: &SimplicialComplex, basis: &HomologyBasis) -> bool {
    let (k, f) = (basis.k, basis.field);
    let mut buf = Vec::new();
    if k > 0 {
        let faces = c.simplices(k - 1);
        let cols: Vec<SparseCol> =
            c.simplices(k).iter().map(|s| boundary_column(f, s, faces, &mut buf).unwrap()).collect();
        let mut acc = Vec::new();
        let mut tmp = Vec::new();
        for z in &basis.representatives {
            acc.clear();
            for &(i, a) in z {
                axpy(f, &acc, a, &cols[i as usize], &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
            if !acc.is_empty() {
                return false;
            }
        }
    }
    let mut bounds: Vec<SparseCol> = if k < c.k_cap() {
        c.simplices(k + 1).iter().map(|s| boundary_column(f, s, c.simplices(k), &mut buf).unwrap()).collect()
    } else {
        Vec::new()
    };
    let rb = rank_of_columns(f, &bounds);
    bounds.extend(basis.representatives.iter().cloned());
    rank_of_columns(f, &bounds) == rb + basis.rank()
}
