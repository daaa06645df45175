//! Simplicial complexes: Čech construction, counts, restriction, union and
//! intersection, and a line-oriented text format.

mod build;
pub mod io;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_process::{PointSample, Window};

pub use build::{build_cech, build_cech_on};
pub use simplex::{Simplex, SimplexList};

/// Simplex counts `S_0, S_1, ...`, indexed by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexCounts(pub Vec<usize>);

impl SimplexCounts {
    pub fn get(&self, j: usize) -> usize {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(j, &s)| if j % 2 == 0 { s as i64 } else { -(s as i64) }).sum()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Finite simplicial complex on the vertex universe `0..vertex_count`,
/// storing simplices of dimension `0..=k_cap`.
///
/// A complex is `truncated` when simplices above `k_cap` may exist in the
/// underlying (e.g. Čech) complex but were not enumerated.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    levels: Vec<SimplexList>,
    truncated: bool,
    radius: Option<f64>,
    source_seed: Option<u64>,
}

impl SimplicialComplex {
    /// Empty complex storing dimensions `0..=k_cap`.
    pub fn empty(vertex_count: usize, k_cap: usize) -> Self {
        SimplicialComplex {
            vertex_count,
            levels: (0..=k_cap).map(|j| SimplexList::new(j + 1)).collect(),
            truncated: false,
            radius: None,
            source_seed: None,
        }
    }

    pub(crate) fn from_levels(vertex_count: usize, levels: Vec<SimplexList>, truncated: bool) -> Self {
        SimplicialComplex { vertex_count, levels, truncated, radius: None, source_seed: None }
    }

    /// Downward closure of `simplices`, keeping dimensions up to `k_cap`.
    ///
    /// `k_cap` must be at least the largest simplex dimension given.
    pub fn from_simplices<I>(vertex_count: usize, k_cap: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut rows: Vec<Vec<Vec<u32>>> = vec![Vec::new(); k_cap + 1];
        for s in simplices {
            if s.dim() > k_cap {
                return Err(Error::invalid(format!("simplex of dimension {} above cap {k_cap}", s.dim())));
            }
            if let Some(&v) = s.vertices().iter().find(|&&v| v as usize >= vertex_count) {
                return Err(Error::invalid(format!("vertex {v} outside universe of size {vertex_count}")));
            }
            add_faces(s.vertices(), &mut rows);
        }
        let levels = rows.into_iter().enumerate().map(|(j, r)| SimplexList::from_rows(j + 1, r)).collect();
        Ok(Self::from_levels(vertex_count, levels, false))
    }

    /// Convenience wrapper taking raw vertex lists.
    pub fn from_vertex_lists(vertex_count: usize, k_cap: usize, lists: &[Vec<u32>]) -> Result<Self> {
        let simplices: Result<Vec<Simplex>> = lists.iter().map(|l| Simplex::new(l.clone())).collect();
        Self::from_simplices(vertex_count, k_cap, simplices?)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn k_cap(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn source_seed(&self) -> Option<u64> {
        self.source_seed
    }

    pub(crate) fn set_provenance(&mut self, radius: f64, seed: u64) {
        self.radius = Some(radius);
        self.source_seed = Some(seed);
    }

    /// Simplices of dimension `j`.
    ///
    /// # Panics
    /// If `j > k_cap`.
    pub fn simplices(&self, j: usize) -> &SimplexList {
        &self.levels[j]
    }

    /// Number of `j`-simplices (0 above the cap).
    pub fn count(&self, j: usize) -> usize {
        self.levels.get(j).map_or(0, SimplexList::len)
    }

    pub fn levels(&self) -> &[SimplexList] {
        &self.levels
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        !s.is_empty() && s.len() <= self.levels.len() && self.levels[s.len() - 1].contains(s)
    }

    /// Largest dimension with at least one simplex, `None` for the empty complex.
    pub fn top_dimension(&self) -> Option<usize> {
        self.levels.iter().rposition(|l| !l.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(SimplexList::is_empty)
    }

    /// Check that every facet of every stored simplex is stored.
    pub fn is_downward_closed(&self) -> bool {
        let mut face = Vec::new();
        for j in 1..self.levels.len() {
            for s in self.levels[j].iter() {
                for skip in 0..s.len() {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    if !self.levels[j - 1].contains(&face) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Keep dimensions `0..=k` only.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let mut out = self.clone();
        if k < self.k_cap() {
            out.truncated = self.truncated || !self.levels[k + 1].is_empty();
            out.levels.truncate(k + 1);
        }
        out
    }

    /// Same simplices with a larger cap (new levels empty).
    pub fn with_cap(&self, k_cap: usize) -> SimplicialComplex {
        if k_cap <= self.k_cap() {
            return self.skeleton(k_cap);
        }
        let mut out = self.clone();
        for j in self.levels.len()..=k_cap {
            out.levels.push(SimplexList::new(j + 1));
        }
        out
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.vertex_count == other.vertex_count
            && self.levels.iter().enumerate().all(|(j, l)| {
                l.is_empty() || (j < other.levels.len() && l.iter().all(|s| other.levels[j].contains(s)))
            })
    }
}

fn add_faces(s: &[u32], rows: &mut [Vec<Vec<u32>>]) {
    let n = s.len();
    // every nonempty subset, via bitmask (simplices are small)
    for mask in 1u64..(1u64 << n) {
        let face: Vec<u32> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
        rows[face.len() - 1].push(face);
    }
}

/// Exact simplex counts per dimension.
pub fn count_simplices(c: &SimplicialComplex) -> SimplexCounts {
    SimplexCounts(c.levels.iter().map(SimplexList::len).collect())
}

/// Counts of simplices with at least one vertex in `region` (vertex `i` is
/// point `i` of `s`).
pub fn count_simplices_in_region(c: &SimplicialComplex, s: &PointSample, region: &Window) -> Result<SimplexCounts> {
    if s.len() > c.vertex_count() {
        return Err(Error::invalid("sample has more points than the complex has vertices"));
    }
    let inside: Vec<bool> = (0..c.vertex_count()).map(|i| i < s.len() && region.contains(s.point(i))).collect();
    Ok(count_with_vertex_in(c, &inside))
}

/// Counts of simplices with at least one vertex flagged in `mark`.
pub fn count_with_vertex_in(c: &SimplicialComplex, mark: &[bool]) -> SimplexCounts {
    SimplexCounts(
        c.levels.iter().map(|l| l.iter().filter(|s| s.iter().any(|&v| mark[v as usize])).count()).collect(),
    )
}

/// Induced subcomplex on `keep`.
pub fn restrict_to_vertices(c: &SimplicialComplex, keep: &[u32]) -> SimplicialComplex {
    let mut mask = vec![false; c.vertex_count];
    for &v in keep {
        if (v as usize) < mask.len() {
            mask[v as usize] = true;
        }
    }
    let levels = c.levels.iter().map(|l| l.filter(|s| s.iter().all(|&v| mask[v as usize]))).collect();
    SimplicialComplex { levels, ..c.clone() }
}

fn check_universe(c1: &SimplicialComplex, c2: &SimplicialComplex) -> Result<()> {
    if c1.vertex_count != c2.vertex_count {
        return Err(Error::IncompatibleComplexes(format!(
            "vertex universes differ ({} vs {})",
            c1.vertex_count, c2.vertex_count
        )));
    }
    Ok(())
}

/// Simplex-wise union; the cap is the larger of the two.
pub fn complex_union(c1: &SimplicialComplex, c2: &SimplicialComplex) -> Result<SimplicialComplex> {
    check_universe(c1, c2)?;
    let cap = c1.k_cap().max(c2.k_cap());
    let (a, b) = (c1.with_cap(cap), c2.with_cap(cap));
    let levels = (0..=cap).map(|j| SimplexList::merge(&a.levels[j], &b.levels[j], |x, y| x || y)).collect();
    Ok(SimplicialComplex::from_levels(c1.vertex_count, levels, c1.truncated || c2.truncated))
}

/// Simplex-wise intersection; the cap is the smaller of the two.
pub fn complex_intersection(c1: &SimplicialComplex, c2: &SimplicialComplex) -> Result<SimplicialComplex> {
    check_universe(c1, c2)?;
    let cap = c1.k_cap().min(c2.k_cap());
    let levels = (0..=cap).map(|j| SimplexList::merge(&c1.levels[j], &c2.levels[j], |x, y| x && y)).collect();
    Ok(SimplicialComplex::from_levels(c1.vertex_count, levels, c1.truncated || c2.truncated))
}
