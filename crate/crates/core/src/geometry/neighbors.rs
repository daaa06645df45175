use std::collections::HashMap;
use std::io::Write;

use super::meb::dist2;
use crate::error::{Error, Result};
use crate::point_process::PointSample;

/// Distance-threshold graph: `i ~ j` iff `|x_i - x_j| <= cutoff`.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborGraph {
    cutoff: f64,
    adjacency: Vec<Vec<u32>>,
}

impl NeighborGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Sorted neighbors of `i`.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    /// Neighbors of `i` with larger index.
    pub fn upper_neighbors(&self, i: usize) -> &[u32] {
        let adj = &self.adjacency[i];
        let start = adj.partition_point(|&j| (j as usize) <= i);
        &adj[start..]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.adjacency.len()).flat_map(move |i| self.upper_neighbors(i).iter().map(move |&j| (i as u32, j)))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&(j as u32)).is_ok()
    }

    pub fn write_edge_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "i,j")?;
        for (i, j) in self.edges() {
            writeln!(out, "{i},{j}")?;
        }
        Ok(())
    }
}

/// Build the exact `cutoff`-neighbor graph with a uniform hash grid of cell
/// side `cutoff`.
pub fn build_neighbor_graph(s: &PointSample, cutoff: f64) -> Result<NeighborGraph> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::invalid(format!("cutoff must be positive, got {cutoff}")));
    }
    Ok(neighbor_graph_of(s.coords(), s.dim(), cutoff))
}

pub(crate) fn neighbor_graph_of(coords: &[f64], dim: usize, cutoff: f64) -> NeighborGraph {
    let n = coords.len() / dim;
    let point = |i: usize| &coords[i * dim..(i + 1) * dim];
    let c2 = cutoff * cutoff;
    let cell_of = |p: &[f64], key: &mut Vec<i64>| {
        key.clear();
        key.extend(p.iter().map(|&c| (c / cutoff).floor() as i64));
    };

    let mut cells: HashMap<Box<[i64]>, Vec<u32>> = HashMap::new();
    let mut key = Vec::with_capacity(dim);
    for i in 0..n {
        cell_of(point(i), &mut key);
        cells.entry(key.clone().into_boxed_slice()).or_default().push(i as u32);
    }

    let mut adjacency = vec![Vec::new(); n];
    let offsets = 3usize.pow(dim as u32);
    let mut probe = vec![0i64; dim];
    for i in 0..n {
        cell_of(point(i), &mut key);
        for o in 0..offsets {
            let mut rem = o;
            for a in 0..dim {
                probe[a] = key[a] + (rem % 3) as i64 - 1;
                rem /= 3;
            }
            if let Some(members) = cells.get(probe.as_slice()) {
                for &j in members {
                    if (j as usize) > i && dist2(point(i), point(j as usize)) <= c2 {
                        adjacency[i].push(j);
                        adjacency[j as usize].push(i as u32);
                    }
                }
            }
        }
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    NeighborGraph { cutoff, adjacency }
}
