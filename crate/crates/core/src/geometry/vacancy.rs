//! Grid approximation of the vacant region of the Boolean model.

use std::collections::HashMap;
use std::io::Write;

use super::meb::dist2;
use super::neighbors::neighbor_graph_of;
use crate::error::{Error, Result};
use crate::homology::UnionFind;
use crate::point_process::{PointSample, Window};

/// Minimum number of grid cells per unit of radius.
pub const MIN_CELLS_PER_RADIUS: f64 = 8.0;

/// Critical values within this many cells of `r` get a witness node.
const WITNESS_CELLS: f64 = 8.0;

// Uphill walk length in half cells, and the slope below which it stops.
const CLIMB_STEPS: usize = 256;
const CLIMB_FLAT: f64 = 0.05;

/// Forward half of the 5x5 neighborhood, excluding face neighbors.
const LINK_OFFSETS: [(i64, i64); 10] =
    [(1, 1), (1, -1), (2, 0), (0, 2), (2, 1), (2, -1), (1, 2), (1, -2), (2, 2), (2, -2)];

/// Largest dimension handled by the flood fill.
pub const MAX_VACANCY_DIM: usize = 3;

/// Occupancy bitmap over the bounding box of a window.
#[derive(Clone, Debug)]
pub struct VacancyGrid {
    window: Window,
    resolution: f64,
    cells: Vec<usize>,
    lower: Vec<f64>,
    cell_size: Vec<f64>,
    /// `Some(true)` occupied, `Some(false)` vacant, `None` outside the window.
    state: Vec<Option<bool>>,
    r: f64,
    points: Vec<f64>,
    /// Hash grid over the points with cell side `index_cell`.
    index: HashMap<Box<[i64]>, Vec<u32>>,
    index_cell: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VacantComponents {
    pub bounded: usize,
    pub touches_boundary: usize,
}

impl VacancyGrid {
    /// Mark every cell whose center lies within distance `r` of a sample point.
    pub fn new(s: &PointSample, r: f64, w: &Window, resolution: f64) -> Result<Self> {
        let d = w.dim();
        if d > MAX_VACANCY_DIM {
            return Err(Error::invalid(format!("vacancy grid supports d <= {MAX_VACANCY_DIM}")));
        }
        if s.dim() != d {
            return Err(Error::invalid("sample and window dimensions differ"));
        }
        if !(r > 0.0) || !(resolution * r >= MIN_CELLS_PER_RADIUS) {
            return Err(Error::invalid(format!(
                "resolution {resolution} gives {} cells per radius, need at least {MIN_CELLS_PER_RADIUS}",
                resolution * r
            )));
        }
        let (lower, upper) = w.bounds();
        let cells: Vec<usize> = lower.iter().zip(&upper).map(|(a, b)| ((b - a) * resolution).ceil() as usize).collect();
        let cell_size: Vec<f64> = (0..d).map(|a| (upper[a] - lower[a]) / cells[a] as f64).collect();
        let total: usize = cells.iter().product();
        let index_cell = r;
        let mut index: HashMap<Box<[i64]>, Vec<u32>> = HashMap::new();
        for (i, p) in s.points().enumerate() {
            let key: Box<[i64]> = p.iter().map(|&c| (c / index_cell).floor() as i64).collect();
            index.entry(key).or_default().push(i as u32);
        }
        let mut grid = VacancyGrid {
            window: w.clone(),
            resolution,
            cells,
            lower,
            cell_size,
            state: vec![Some(false); total],
            r,
            points: s.coords().to_vec(),
            index,
            index_cell,
        };

        let mut center = vec![0.0; d];
        for flat in 0..total {
            grid.cell_center(flat, &mut center);
            if !w.contains(&center) {
                grid.state[flat] = None;
            }
        }

        let r2 = r * r;
        let mut lo_idx = vec![0usize; d];
        let mut hi_idx = vec![0usize; d];
        for p in s.points() {
            let mut empty = false;
            for a in 0..d {
                let lo = ((p[a] - r - grid.lower[a]) / grid.cell_size[a] - 0.5).ceil().max(0.0);
                let hi = ((p[a] + r - grid.lower[a]) / grid.cell_size[a] - 0.5).floor();
                if hi < 0.0 || lo > (grid.cells[a] - 1) as f64 {
                    empty = true;
                    break;
                }
                lo_idx[a] = lo as usize;
                hi_idx[a] = (hi as usize).min(grid.cells[a] - 1);
                if lo_idx[a] > hi_idx[a] {
                    empty = true;
                }
            }
            if empty {
                continue;
            }
            let mut idx = lo_idx.clone();
            loop {
                let mut d2 = 0.0;
                for a in 0..d {
                    let c = grid.lower[a] + (idx[a] as f64 + 0.5) * grid.cell_size[a];
                    d2 += (c - p[a]) * (c - p[a]);
                }
                if d2 <= r2 {
                    let flat = grid.flat(&idx);
                    if let Some(st) = grid.state[flat].as_mut() {
                        *st = true;
                    }
                }
                // odometer increment
                let mut a = 0;
                loop {
                    if a == d {
                        break;
                    }
                    if idx[a] < hi_idx[a] {
                        idx[a] += 1;
                        break;
                    }
                    idx[a] = lo_idx[a];
                    a += 1;
                }
                if a == d {
                    break;
                }
            }
        }
        Ok(grid)
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.cells).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for a in (0..self.cells.len()).rev() {
            idx[a] = flat % self.cells[a];
            flat /= self.cells[a];
        }
    }

    fn cell_center(&self, flat: usize, out: &mut [f64]) {
        let mut idx = vec![0; self.cells.len()];
        self.unflatten(flat, &mut idx);
        for a in 0..idx.len() {
            out[a] = self.lower[a] + (idx[a] as f64 + 0.5) * self.cell_size[a];
        }
    }

    pub fn cells_per_axis(&self) -> &[usize] {
        &self.cells
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn is_occupied(&self, idx: &[usize]) -> bool {
        self.state[self.flat(idx)] == Some(true)
    }

    /// Components of the vacant region as seen by the grid.
    ///
    /// Face-adjacent vacant cells are joined unless the step between their
    /// centers crosses the center segment of two overlapping balls, so thin
    /// overlaps never leak.
    /// Near-degenerate critical points of the distance function (midpoints of
    /// nearly tangent pairs, circumcenters of nearly covered simplices) are
    /// added as extra vacant nodes and joined to cells they see along vacant
    /// segments; they recover corridors and holes thinner than a cell.
    pub fn components(&self) -> VacantComponents {
        self.labelled_components().0
    }

    /// One vacant point in each bounded component.
    pub fn bounded_sites(&self) -> Vec<Vec<f64>> {
        self.labelled_components().1
    }

    fn labelled_components(&self) -> (VacantComponents, Vec<Vec<f64>>) {
        let d = self.cells.len();
        let n_cells = self.state.len();
        let witnesses = self.witnesses();
        let mut uf = UnionFind::new(n_cells + witnesses.len());
        let mut touches = vec![false; n_cells + witnesses.len()];
        let mut idx = vec![0usize; d];
        let (mut a_c, mut b_c) = (vec![0.0; d], vec![0.0; d]);
        let (mut near, mut far) = (Vec::new(), Vec::new());
        for c in 0..n_cells {
            if self.state[c] != Some(false) {
                continue;
            }
            self.unflatten(c, &mut idx);
            self.cell_center(c, &mut a_c);
            for a in 0..d {
                for step in [-1i64, 1] {
                    let ni = idx[a] as i64 + step;
                    if ni < 0 || ni >= self.cells[a] as i64 {
                        touches[c] = true;
                        continue;
                    }
                    let saved = idx[a];
                    idx[a] = ni as usize;
                    let nf = self.flat(&idx);
                    idx[a] = saved;
                    match self.state[nf] {
                        None => touches[c] = true,
                        Some(false) if nf > c => {
                            self.cell_center(nf, &mut b_c);
                            if !self.crosses_bridge(&a_c, &b_c, &mut near, &mut far) {
                                uf.union(c, nf);
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        if d == 2 {
            self.link_nearby_cells(&mut uf, &mut near);
        }
        self.link_witnesses(&witnesses, &mut uf);
        let total = n_cells + witnesses.len();
        self.climb_from_enclosed(&witnesses, &touches, &mut uf);
        let mut root_touches = vec![false; total];
        let mut site: Vec<Option<usize>> = vec![None; total];
        for v in 0..total {
            if v < n_cells && self.state[v] != Some(false) {
                continue;
            }
            let root = uf.find(v);
            site[root].get_or_insert(v);
            root_touches[root] |= touches[v];
        }
        let mut out = VacantComponents { bounded: 0, touches_boundary: 0 };
        let mut sites = Vec::new();
        for v in 0..total {
            let Some(rep) = site[v] else { continue };
            if root_touches[v] {
                out.touches_boundary += 1;
            } else {
                out.bounded += 1;
                let mut x = vec![0.0; d];
                if rep < n_cells {
                    self.cell_center(rep, &mut x);
                } else {
                    x.clone_from(&witnesses[rep - n_cells].at);
                }
                sites.push(x);
            }
        }
        (out, sites)
    }

    /// Follow the distance function uphill from one node of every component
    /// that looks enclosed, joining the vacant cells passed on the way. The
    /// distance to the sample only grows along the path, so it stays vacant;
    /// this drains cusp pockets cut off from their region by the grid.
    fn climb_from_enclosed(&self, witnesses: &[Witness], touches: &[bool], uf: &mut UnionFind) {
        let d = self.cells.len();
        let n_cells = self.state.len();
        let total = n_cells + witnesses.len();
        let mut root_touches = vec![false; total];
        for v in 0..total {
            if v >= n_cells || self.state[v] == Some(false) {
                let root = uf.find(v);
                root_touches[root] |= touches[v];
            }
        }
        let mut starts = Vec::new();
        let mut seen = vec![false; total];
        for v in 0..total {
            if v < n_cells && self.state[v] != Some(false) {
                continue;
            }
            let root = uf.find(v);
            if !root_touches[root] && !seen[root] {
                seen[root] = true;
                starts.push(v);
            }
        }
        let step = 0.5 * self.cell_size.iter().copied().fold(f64::INFINITY, f64::min);
        let mut x = vec![0.0; d];
        let mut center = vec![0.0; d];
        let mut near = Vec::new();
        for v in starts {
            if v < n_cells {
                self.cell_center(v, &mut x);
            } else {
                x.clone_from(&witnesses[v - n_cells].at);
            }
            for _ in 0..CLIMB_STEPS {
                let Some(dir) = self.ascent(&x, step, &mut near) else { break };
                let next: Vec<f64> = x.iter().zip(&dir).map(|(a, u)| a + step * u).collect();
                if !self.window.contains(&next) || !self.segment_vacant_with(&x, &next, &mut near) {
                    break;
                }
                x = next;
                let Some(cell) = self.cell_of(&x) else { break };
                if self.state[cell] == Some(false) && uf.find(cell) != uf.find(v) {
                    self.cell_center(cell, &mut center);
                    if self.segment_vacant_with(&x, &center, &mut near) {
                        uf.union(cell, v);
                    }
                }
            }
        }
    }

    /// Steepest ascent direction of the distance to the sample at `x`, taken
    /// as the shortest vector in the hull of the unit directions away from
    /// the points within `tol` of the nearest one. `None` near a maximum.
    fn ascent(&self, x: &[f64], tol: f64, near: &mut Vec<u32>) -> Option<Vec<f64>> {
        let d = x.len();
        self.points_near(x, 2.0 * self.r + WITNESS_CELLS * self.max_cell(), near);
        let nearest = near.iter().map(|&j| dist2(self.point(j as usize), x).sqrt()).fold(f64::INFINITY, f64::min);
        if !nearest.is_finite() {
            return None;
        }
        let units: Vec<Vec<f64>> = near
            .iter()
            .filter_map(|&j| {
                let p = self.point(j as usize);
                let dist = dist2(p, x).sqrt();
                (dist <= nearest + tol).then(|| x.iter().zip(p).map(|(a, b)| (a - b) / dist).collect())
            })
            .collect();
        let dir = min_norm_in_hull(&units);
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        (norm > CLIMB_FLAT).then(|| dir.iter().map(|v| v / norm).collect::<Vec<_>>()).filter(|v| v.len() == d)
    }

    fn cell_of(&self, x: &[f64]) -> Option<usize> {
        let mut idx = [0usize; MAX_VACANCY_DIM];
        for a in 0..x.len() {
            let t = ((x[a] - self.lower[a]) / self.cell_size[a]).floor();
            if t < 0.0 || t >= self.cells[a] as f64 {
                return None;
            }
            idx[a] = t as usize;
        }
        Some(self.flat(&idx[..x.len()]))
    }

    /// Join planar vacant cells up to two steps apart along vacant straight
    /// segments; recovers diagonal corridors and cusp cells that have no
    /// vacant face neighbor.
    fn link_nearby_cells(&self, uf: &mut UnionFind, buf: &mut Vec<u32>) {
        let (nx, ny) = (self.cells[0], self.cells[1]);
        let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
        for x in 0..nx {
            for y in 0..ny {
                let c = self.flat(&[x, y]);
                if self.state[c] != Some(false) {
                    continue;
                }
                a[0] = self.lower[0] + (x as f64 + 0.5) * self.cell_size[0];
                a[1] = self.lower[1] + (y as f64 + 0.5) * self.cell_size[1];
                for (dx, dy) in LINK_OFFSETS {
                    let (tx, ty) = (x as i64 + dx, y as i64 + dy);
                    if tx < 0 || ty < 0 || tx >= nx as i64 || ty >= ny as i64 {
                        continue;
                    }
                    let t = self.flat(&[tx as usize, ty as usize]);
                    if self.state[t] != Some(false) || uf.find(c) == uf.find(t) {
                        continue;
                    }
                    b[0] = self.lower[0] + (tx as f64 + 0.5) * self.cell_size[0];
                    b[1] = self.lower[1] + (ty as f64 + 0.5) * self.cell_size[1];
                    if self.segment_vacant_with(&a, &b, buf) {
                        uf.union(c, t);
                    }
                }
            }
        }
    }

    fn max_cell(&self) -> f64 {
        self.cell_size.iter().copied().fold(0.0, f64::max)
    }

    /// Indices of sample points within `reach` of `x`.
    fn points_near(&self, x: &[f64], reach: f64, out: &mut Vec<u32>) {
        out.clear();
        let d = x.len();
        let (mut lo, mut hi) = ([0i64; MAX_VACANCY_DIM], [0i64; MAX_VACANCY_DIM]);
        for a in 0..d {
            lo[a] = ((x[a] - reach) / self.index_cell).floor() as i64;
            hi[a] = ((x[a] + reach) / self.index_cell).floor() as i64;
        }
        let mut key = lo;
        let reach2 = reach * reach;
        loop {
            if let Some(members) = self.index.get(&key[..d]) {
                out.extend(members.iter().copied().filter(|&j| dist2(self.point(j as usize), x) <= reach2));
            }
            let mut a = 0;
            while a < d {
                if key[a] < hi[a] {
                    key[a] += 1;
                    break;
                }
                key[a] = lo[a];
                a += 1;
            }
            if a == d {
                return;
            }
        }
    }

    fn point(&self, i: usize) -> &[f64] {
        let d = self.cells.len();
        &self.points[i * d..(i + 1) * d]
    }

    /// Whether the step between adjacent vacant cell centers crosses the
    /// segment joining two overlapping balls, which lies in the union and
    /// separates the two sides locally. In the plane this is the only way two
    /// points a cell apart can be separated; elsewhere adjacency is kept.
    fn crosses_bridge(&self, a: &[f64], b: &[f64], near: &mut Vec<u32>, far: &mut Vec<u32>) -> bool {
        if a.len() != 2 {
            return false;
        }
        let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let half = 0.5 * dist2(a, b).sqrt();
        self.points_near(&mid, self.r + half, near);
        if near.is_empty() {
            return false;
        }
        self.points_near(&mid, 3.0 * self.r + half, far);
        let r2x4 = 4.0 * self.r * self.r;
        near.iter().any(|&i| {
            let p = self.point(i as usize);
            far.iter().any(|&j| {
                j != i && {
                    let q = self.point(j as usize);
                    dist2(p, q) <= r2x4 && segments_cross(a, b, p, q)
                }
            })
        })
    }

    /// No closed ball meets the segment `[a, b]`.
    fn segment_vacant(&self, a: &[f64], b: &[f64]) -> bool {
        self.segment_vacant_with(a, b, &mut Vec::new())
    }

    fn segment_vacant_with(&self, a: &[f64], b: &[f64], near: &mut Vec<u32>) -> bool {
        let mut mid = [0.0; MAX_VACANCY_DIM];
        for i in 0..a.len() {
            mid[i] = 0.5 * (a[i] + b[i]);
        }
        let half = 0.5 * dist2(a, b).sqrt();
        self.points_near(&mid[..a.len()], self.r + half, near);
        let r2 = self.r * self.r;
        near.iter().all(|&j| segment_dist2(a, b, self.point(j as usize)) > r2)
    }

    fn point_vacant(&self, x: &[f64]) -> bool {
        let mut near = Vec::new();
        self.points_near(x, self.r, &mut near);
        near.is_empty()
    }

    /// Vacant critical points of the distance function whose critical value
    /// is within a few cells of `r`, inside the window.
    ///
    /// For simplices of codimension one the points are continued along the
    /// normal line through the circumcenter (the descending direction of the
    /// saddle) in steps of half a cell, so a corridor thinner than a cell is
    /// followed until it is wide enough to contain cell centers.
    fn witnesses(&self) -> Vec<Witness> {
        let d = self.cells.len();
        let n = self.points.len() / d.max(1);
        if n == 0 {
            return Vec::new();
        }
        let slack = WITNESS_CELLS * self.max_cell();
        let graph = neighbor_graph_of(&self.points, d, 2.0 * (self.r + slack));
        let mut out = Vec::new();
        let consider = |verts: &[usize], out: &mut Vec<Witness>| {
            let pts: Vec<&[f64]> = verts.iter().map(|&v| self.point(v)).collect();
            let Some(c) = circumcenter(&pts) else { return };
            let rad = dist2(&c, pts[0]).sqrt();
            if !(rad > self.r && rad <= self.r + slack && self.window.contains(&c) && self.point_vacant(&c)) {
                return;
            }
            let anchor = out.len();
            out.push(Witness { at: c.clone(), chain: None });
            let Some(normal) = unit_normal(&pts) else { return };
            let step = 0.5 * self.cell_size.iter().copied().fold(f64::INFINITY, f64::min);
            let reach = if d <= 2 { 2.0 * self.r } else { self.r };
            for sign in [-1.0, 1.0] {
                let mut prev = c.clone();
                let mut prev_node = anchor;
                let mut t = step;
                while t <= reach {
                    let x: Vec<f64> = c.iter().zip(&normal).map(|(a, v)| a + sign * t * v).collect();
                    if !self.window.contains(&x) || !self.segment_vacant(&prev, &x) {
                        break;
                    }
                    out.push(Witness { at: x.clone(), chain: Some(prev_node) });
                    prev_node = out.len() - 1;
                    prev = x;
                    t += step;
                }
            }
        };
        for i in 0..n {
            let up = graph.upper_neighbors(i);
            for (a, &j) in up.iter().enumerate() {
                let j = j as usize;
                consider(&[i, j], &mut out);
                for &k in &up[a + 1..] {
                    let k = k as usize;
                    if !graph.has_edge(j, k) {
                        continue;
                    }
                    consider(&[i, j, k], &mut out);
                    if d >= 3 {
                        for &l in up.iter().filter(|&&l| l as usize > k) {
                            let l = l as usize;
                            if graph.has_edge(j, l) && graph.has_edge(k, l) {
                                consider(&[i, j, k, l], &mut out);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Join witnesses to their chain predecessors, and to the vacant cells
    /// they see: circumcenters within the link radius, chain points within
    /// two cells.
    fn link_witnesses(&self, witnesses: &[Witness], uf: &mut UnionFind) {
        let d = self.cells.len();
        let n_cells = self.state.len();
        let far = if d <= 2 { 2.0 * self.r } else { self.r };
        let near = 2.0 * self.max_cell();
        let mut center = vec![0.0; d];
        for (wi, w) in witnesses.iter().enumerate() {
            let node = n_cells + wi;
            if let Some(p) = w.chain {
                uf.union(node, n_cells + p);
            }
            let reach = if w.chain.is_some() { near } else { far };
            let x = &w.at;
            let lo: Vec<usize> = (0..d)
                .map(|a| (((x[a] - reach - self.lower[a]) / self.cell_size[a]).floor().max(0.0)) as usize)
                .collect();
            let hi: Vec<usize> = (0..d)
                .map(|a| {
                    let h = ((x[a] + reach - self.lower[a]) / self.cell_size[a]).floor().max(0.0) as usize;
                    h.min(self.cells[a] - 1)
                })
                .collect();
            let mut idx = lo.clone();
            loop {
                let flat = self.flat(&idx);
                if self.state[flat] == Some(false) {
                    self.cell_center(flat, &mut center);
                    if dist2(&center, x) <= reach * reach
                        && uf.find(flat) != uf.find(node)
                        && self.segment_vacant(x, &center)
                    {
                        uf.union(flat, node);
                    }
                }
                let mut a = 0;
                while a < d {
                    if idx[a] < hi[a] {
                        idx[a] += 1;
                        break;
                    }
                    idx[a] = lo[a];
                    a += 1;
                }
                if a == d {
                    break;
                }
            }
        }
        // circumcenters that see each other (tiny holes split by a saddle)
        let anchors: Vec<usize> = (0..witnesses.len()).filter(|&i| witnesses[i].chain.is_none()).collect();
        for (a, &i) in anchors.iter().enumerate() {
            for &j in &anchors[a + 1..] {
                let (p, q) = (&witnesses[i].at, &witnesses[j].at);
                if dist2(p, q) <= far * far && uf.find(n_cells + i) != uf.find(n_cells + j) && self.segment_vacant(p, q) {
                    uf.union(n_cells + i, n_cells + j);
                }
            }
        }
    }

    /// Binary PGM (P5) for d = 2: occupied black, vacant white, outside grey.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        if self.cells.len() != 2 {
            return Err(Error::invalid("PGM dump needs a 2-dimensional grid"));
        }
        let (nx, ny) = (self.cells[0], self.cells[1]);
        write!(out, "P5\n{nx} {ny}\n255\n")?;
        let mut row = Vec::with_capacity(nx);
        for y in (0..ny).rev() {
            row.clear();
            for x in 0..nx {
                row.push(match self.state[self.flat(&[x, y])] {
                    Some(true) => 0u8,
                    Some(false) => 255,
                    None => 128,
                });
            }
            out.write_all(&row)?;
        }
        Ok(())
    }
}

/// Extra vacant node of the component graph.
#[derive(Clone, Debug)]
struct Witness {
    at: Vec<f64>,
    /// Previous point on a normal walk, if this is not a circumcenter.
    chain: Option<usize>,
}

/// Unit normal of the affine hull of `pts` when it has codimension one
/// (a pair in the plane, a triangle in space).
fn unit_normal(pts: &[&[f64]]) -> Option<Vec<f64>> {
    let d = pts[0].len();
    let e = |i: usize| -> Vec<f64> { pts[i].iter().zip(pts[0]).map(|(a, b)| a - b).collect() };
    let v = match (d, pts.len()) {
        (2, 2) => {
            let u = e(1);
            vec![-u[1], u[0]]
        }
        (3, 3) => {
            let (u, w) = (e(1), e(2));
            vec![u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]]
        }
        _ => return None,
    };
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 0.0).then(|| v.iter().map(|x| x / norm).collect())
}

/// Squared distance from `p` to the segment `[a, b]`.
/// Shortest vector in the convex hull of `vs`, by Frank-Wolfe iterations
/// started from the shortest input.
fn min_norm_in_hull(vs: &[Vec<f64>]) -> Vec<f64> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut best = vs[0].clone();
    for v in &vs[1..] {
        if dot(v, v) < dot(&best, &best) {
            best = v.clone();
        }
    }
    for _ in 0..64 {
        let s = vs.iter().min_by(|a, b| dot(a, &best).total_cmp(&dot(b, &best))).unwrap();
        let diff: Vec<f64> = best.iter().zip(s).map(|(a, b)| a - b).collect();
        let dd = dot(&diff, &diff);
        if dd <= 1e-18 {
            break;
        }
        let t = (dot(&best, &diff) / dd).clamp(0.0, 1.0);
        if t <= 1e-12 {
            break;
        }
        for (b, df) in best.iter_mut().zip(&diff) {
            *b -= t * df;
        }
    }
    best
}

fn segment_dist2(a: &[f64], b: &[f64], p: &[f64]) -> f64 {
    let (mut ab2, mut t) = (0.0, 0.0);
    for i in 0..a.len() {
        let e = b[i] - a[i];
        ab2 += e * e;
        t += (p[i] - a[i]) * e;
    }
    let t = if ab2 > 0.0 { (t / ab2).clamp(0.0, 1.0) } else { 0.0 };
    a.iter().zip(b).zip(p).map(|((&x, &y), &q)| {
        let c = x + t * (y - x) - q;
        c * c
    }).sum()
}

/// Closed planar segments `[a, b]` and `[c, d]` intersect.
fn segments_cross(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> bool {
    let orient = |p: &[f64], q: &[f64], r: &[f64]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let on = |p: &[f64], q: &[f64], r: &[f64]| {
        r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
    };
    let (d1, d2, d3, d4) = (orient(c, d, a), orient(c, d, b), orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on(c, d, a)) || (d2 == 0.0 && on(c, d, b)) || (d3 == 0.0 && on(a, b, c)) || (d4 == 0.0 && on(a, b, d))
}

/// Center of the sphere through `pts` within their affine hull; `None` for
/// affinely dependent points.
fn circumcenter(pts: &[&[f64]]) -> Option<Vec<f64>> {
    let p0 = pts[0];
    let m = pts.len() - 1;
    let e: Vec<Vec<f64>> = pts[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let g = nalgebra::DMatrix::from_fn(m, m, |i, j| 2.0 * dot(&e[i], &e[j]));
    let rhs = nalgebra::DVector::from_fn(m, |i, _| dot(&e[i], &e[i]));
    let scale = g.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let lu = g.lu();
    let det = lu.determinant();
    if !(det.abs() > 1e-12 * scale.powi(m as i32)) {
        return None;
    }
    let lam = lu.solve(&rhs)?;
    let mut c = p0.to_vec();
    for (i, ei) in e.iter().enumerate() {
        for (ca, x) in c.iter_mut().zip(ei) {
            *ca += lam[i] * x;
        }
    }
    Some(c)
}

/// Count vacant components of the radius-`r` Boolean model over `s`, inside `w`.
///
/// `bounded` approximates `beta_{d-1}` of the union of balls when all balls
/// stay clear of the window frame.
pub fn vacant_component_count(s: &PointSample, r: f64, w: &Window, resolution: f64) -> Result<VacantComponents> {
    Ok(VacancyGrid::new(s, r, w, resolution)?.components())
}
