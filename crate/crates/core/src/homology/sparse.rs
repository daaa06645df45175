//! Sparse columns over GF(p) and left-to-right column reduction.

use super::FieldSpec;

/// Sparse vector as `(row, coefficient)` pairs, rows strictly increasing,
/// coefficients nonzero residues.
pub type SparseCol = Vec<(u32, u32)>;

const NO_PIVOT: u32 = u32::MAX;

/// `out = a + c * b`.
pub(crate) fn axpy(field: FieldSpec, a: &[(u32, u32)], c: u32, b: &[(u32, u32)], out: &mut SparseCol) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(c, b[j].1)));
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
}

/// Incremental column reducer: columns are appended one at a time and reduced
/// against the stored ones so that every nonzero reduced column has a distinct
/// lowest row. Rows may grow between pushes.
#[derive(Clone, Debug)]
pub(crate) struct ColumnReducer {
    field: FieldSpec,
    pivot_of_row: Vec<u32>,
    reduced: Vec<SparseCol>,
    // column combinations, recorded when `track` is set
    combos: Option<Vec<SparseCol>>,
    rank: usize,
    scratch: SparseCol,
}

impl ColumnReducer {
    pub fn new(field: FieldSpec, track: bool) -> Self {
        ColumnReducer {
            field,
            pivot_of_row: Vec::new(),
            reduced: Vec::new(),
            combos: track.then(Vec::new),
            rank: 0,
            scratch: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.reduced.len()
    }

    pub fn reduced(&self, j: usize) -> &SparseCol {
        &self.reduced[j]
    }

    /// Combination of original columns giving reduced column `j`.
    pub fn combo(&self, j: usize) -> &SparseCol {
        &self.combos.as_ref().expect("reducer built without tracking")[j]
    }

    pub fn is_pivot_row(&self, row: u32) -> bool {
        self.pivot_of_row.get(row as usize).is_some_and(|&c| c != NO_PIVOT)
    }

    /// Push a column; returns whether it stayed nonzero (raised the rank).
    pub fn push(&mut self, mut col: SparseCol) -> bool {
        let f = self.field;
        let j = self.reduced.len() as u32;
        let mut combo: SparseCol = if self.combos.is_some() { vec![(j, 1)] } else { Vec::new() };
        let mut combo_scratch = Vec::new();
        while let Some(&(low, a)) = col.last() {
            let piv = self.pivot_of_row.get(low as usize).copied().unwrap_or(NO_PIVOT);
            if piv == NO_PIVOT {
                break;
            }
            let other = &self.reduced[piv as usize];
            let b = other.last().unwrap().1;
            let c = f.neg(f.mul(a, f.inv(b)));
            axpy(f, &col, c, other, &mut self.scratch);
            std::mem::swap(&mut col, &mut self.scratch);
            if let Some(combos) = &self.combos {
                axpy(f, &combo, c, &combos[piv as usize], &mut combo_scratch);
                std::mem::swap(&mut combo, &mut combo_scratch);
            }
        }
        let nonzero = if let Some(&(low, _)) = col.last() {
            let low = low as usize;
            if self.pivot_of_row.len() <= low {
                self.pivot_of_row.resize(low + 1, NO_PIVOT);
            }
            self.pivot_of_row[low] = j;
            self.rank += 1;
            true
        } else {
            false
        };
        self.reduced.push(col);
        if let Some(combos) = &mut self.combos {
            combos.push(combo);
        }
        nonzero
    }

    /// Record a column known to reduce to zero without doing the work.
    pub fn push_zero(&mut self) {
        let j = self.reduced.len() as u32;
        self.reduced.push(Vec::new());
        if let Some(combos) = &mut self.combos {
            combos.push(vec![(j, 1)]);
        }
    }
}

/// Rank of a list of sparse columns.
pub fn rank_of_columns(field: FieldSpec, cols: &[SparseCol]) -> usize {
    let mut r = ColumnReducer::new(field, false);
    for c in cols {
        r.push(c.clone());
    }
    r.rank()
}
