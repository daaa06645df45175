use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Strictly increasing vertex list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("a simplex needs at least one vertex"));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("simplex vertices must be distinct"));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

/// All simplices of one dimension, stored flat and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexList {
    arity: usize,
    verts: Vec<u32>,
}

impl SimplexList {
    pub(crate) fn new(arity: usize) -> Self {
        SimplexList { arity, verts: Vec::new() }
    }

    /// Build from flat storage that is already sorted and duplicate-free.
    pub(crate) fn from_sorted(arity: usize, verts: Vec<u32>) -> Self {
        debug_assert_eq!(verts.len() % arity, 0);
        let l = SimplexList { arity, verts };
        debug_assert!(l.is_sorted_strict());
        l
    }

    /// Build from arbitrary rows of length `arity` with sorted vertices.
    pub(crate) fn from_rows(arity: usize, mut rows: Vec<Vec<u32>>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        SimplexList { arity, verts: rows.into_iter().flatten().collect() }
    }

    pub(crate) fn push(&mut self, s: &[u32]) {
        debug_assert_eq!(s.len(), self.arity);
        self.verts.extend_from_slice(s);
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.verts.len() / self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.verts[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.verts.chunks_exact(self.arity)
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.len() != self.arity {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(s) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    fn is_sorted_strict(&self) -> bool {
        (1..self.len()).all(|i| self.get(i - 1) < self.get(i))
    }

    /// Sorted merge; `keep` decides membership from (in_a, in_b).
    pub(crate) fn merge(a: &SimplexList, b: &SimplexList, keep: impl Fn(bool, bool) -> bool) -> SimplexList {
        debug_assert_eq!(a.arity, b.arity);
        let mut out = SimplexList::new(a.arity);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (i < a.len(), j < b.len()) {
                (true, true) => a.get(i).cmp(b.get(j)),
                (true, false) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    if keep(true, false) {
                        out.push(a.get(i));
                    }
                    i += 1;
                }
                Ordering::Greater => {
                    if keep(false, true) {
                        out.push(b.get(j));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    if keep(true, true) {
                        out.push(a.get(i));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub(crate) fn filter(&self, mut pred: impl FnMut(&[u32]) -> bool) -> SimplexList {
        let mut out = SimplexList::new(self.arity);
        for s in self.iter() {
            if pred(s) {
                out.push(s);
            }
        }
        out
    }
}
