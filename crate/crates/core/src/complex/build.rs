use super::{SimplexList, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{cech_simplex_test, neighbor_graph_of, MAX_DIM};
use crate::point_process::PointSample;

/// Čech complex of radius `r` on all points of `s`, up to dimension `k_cap`.
///
/// Vertex `i` is point `i`. Candidates of dimension `j` extend a stored
/// `(j-1)`-simplex by a common neighbor in the `2r` graph, and are tested only
/// when all their facets are already present.
pub fn build_cech(s: &PointSample, r: f64, k_cap: usize) -> Result<SimplicialComplex> {
    let all: Vec<u32> = (0..s.len() as u32).collect();
    build_cech_on(s, &all, s.len(), r, k_cap)
}

/// Čech complex on the points `vertices` (strictly increasing indices into
/// `s`), labelled by those indices inside a universe of `vertex_count`.
pub fn build_cech_on(
    s: &PointSample,
    vertices: &[u32],
    vertex_count: usize,
    r: f64,
    k_cap: usize,
) -> Result<SimplicialComplex> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::invalid(format!("radius must be nonnegative, got {r}")));
    }
    if s.dim() > MAX_DIM {
        return Err(Error::invalid(format!("dimension {} above {MAX_DIM}", s.dim())));
    }
    if vertices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("vertex labels must be strictly increasing"));
    }
    if let Some(&v) = vertices.last() {
        if v as usize >= vertex_count || v as usize >= s.len() {
            return Err(Error::invalid("vertex label outside the sample or universe"));
        }
    }
    let d = s.dim();
    let coords: Vec<f64> = vertices.iter().flat_map(|&v| s.point(v as usize).iter().copied()).collect();
    let mut levels = cech_levels(&coords, d, r, k_cap);
    for level in &mut levels {
        relabel(level, vertices);
    }
    // a downward-closed complex with no k_cap-simplices has nothing above the cap
    let truncated = if k_cap == 0 { vertices.len() > 1 && r > 0.0 } else { !levels[k_cap].is_empty() };
    let mut c = SimplicialComplex::from_levels(vertex_count, levels, truncated);
    c.set_provenance(r, s.seed());
    Ok(c)
}

fn relabel(level: &mut SimplexList, labels: &[u32]) {
    let arity = level.arity();
    let verts: Vec<u32> = level.iter().flat_map(|sx| sx.iter().map(|&v| labels[v as usize])).collect();
    *level = SimplexList::from_sorted(arity, verts);
}

pub(crate) fn cech_levels(coords: &[f64], d: usize, r: f64, k_cap: usize) -> Vec<SimplexList> {
    let n = coords.len() / d;
    let point = |i: u32| &coords[i as usize * d..(i as usize + 1) * d];
    let mut levels = Vec::with_capacity(k_cap + 1);
    levels.push(SimplexList::from_sorted(1, (0..n as u32).collect()));
    if k_cap == 0 || n < 2 {
        for j in 1..=k_cap {
            levels.push(SimplexList::new(j + 1));
        }
        return levels;
    }
    let graph = if r > 0.0 {
        neighbor_graph_of(coords, d, 2.0 * r)
    } else {
        // r = 0: only coincident points would connect, and samples are simple
        neighbor_graph_of(&[], d, 1.0)
    };
    let mut edges = SimplexList::new(2);
    if r > 0.0 {
        for (i, j) in graph.edges() {
            edges.push(&[i, j]);
        }
    }
    levels.push(edges);

    let mut cand = Vec::new();
    let mut buf = Vec::new();
    let mut face = Vec::new();
    let mut pts: Vec<&[f64]> = Vec::with_capacity(k_cap + 1);
    for j in 2..=k_cap {
        let prev = &levels[j - 1];
        let mut next = SimplexList::new(j + 1);
        for sigma in prev.iter() {
            let last = *sigma.last().unwrap();
            // common upper neighbors of every vertex of sigma
            cand.clear();
            cand.extend_from_slice(graph.upper_neighbors(last as usize));
            for &v in &sigma[..sigma.len() - 1] {
                if cand.is_empty() {
                    break;
                }
                intersect_in_place(&mut cand, graph.neighbors(v as usize), &mut buf);
            }
            for &w in &cand {
                if j >= 3 {
                    // facets containing w, other than sigma itself
                    let all_faces = (0..sigma.len()).all(|skip| {
                        face.clear();
                        face.extend(sigma.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                        face.push(w);
                        prev.contains(&face)
                    });
                    if !all_faces {
                        continue;
                    }
                }
                pts.clear();
                pts.extend(sigma.iter().map(|&v| point(v)));
                pts.push(point(w));
                if cech_simplex_test(&pts, r) {
                    face.clear();
                    face.extend_from_slice(sigma);
                    face.push(w);
                    next.push(&face);
                }
            }
        }
        levels.push(next);
    }
    levels
}

fn intersect_in_place(a: &mut Vec<u32>, b: &[u32], buf: &mut Vec<u32>) {
    buf.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                buf.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    std::mem::swap(a, buf);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::count_simplices;
    use crate::geometry::build_neighbor_graph;
    use crate::point_process::{sample_homogeneous_poisson, Window};
    use proptest::prelude::*;

    fn triangle() -> PointSample {
        let h = 3f64.sqrt() / 2.0;
        PointSample::from_points(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]).unwrap()
    }

    #[test]
    fn equilateral_triangle_thresholds() {
        let s = triangle();
        assert_eq!(count_simplices(&build_cech(&s, 0.5, 2).unwrap()).0, vec![3, 3, 0]);
        assert_eq!(count_simplices(&build_cech(&s, 0.58, 2).unwrap()).0, vec![3, 3, 1]);
    }

    #[test]
    fn cech_is_not_rips_for_triangles() {
        // at r = 0.5 all three edges exist (a 2r-clique) but no 2-simplex
        let s = triangle();
        let g = build_neighbor_graph(&s, 1.0).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(build_cech(&s, 0.5, 2).unwrap().count(2), 0);
    }

    /// Exhaustive oracle over all subsets of size <= 3.
    fn brute_force_levels(s: &PointSample, r: f64) -> Vec<Vec<Vec<u32>>> {
        let n = s.len() as u32;
        let mut out = vec![Vec::new(), Vec::new(), Vec::new()];
        for a in 0..n {
            out[0].push(vec![a]);
            for b in a + 1..n {
                if cech_simplex_test(&[s.point(a as usize), s.point(b as usize)], r) {
                    out[1].push(vec![a, b]);
                }
                for c in b + 1..n {
                    let p = [s.point(a as usize), s.point(b as usize), s.point(c as usize)];
                    if cech_simplex_test(&p, r) {
                        out[2].push(vec![a, b, c]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn matches_exhaustive_enumeration() {
        let w = Window::boxed(vec![0.0, 0.0], vec![10.0, 10.0]).unwrap();
        for seed in 0..5 {
            let s = sample_homogeneous_poisson(0.5, &w, seed).unwrap();
            let c = build_cech(&s, 1.0, 2).unwrap();
            let want = brute_force_levels(&s, 1.0);
            for j in 0..3 {
                let got: Vec<Vec<u32>> = c.simplices(j).iter().map(|x| x.to_vec()).collect();
                assert_eq!(got, want[j], "seed {seed} dim {j}");
            }
            assert!(c.is_downward_closed());
        }
    }

    #[test]
    fn higher_dimensions_are_downward_closed_and_cliques() {
        let w = Window::cube(3, 4.0).unwrap();
        let s = sample_homogeneous_poisson(2.0, &w, 8).unwrap();
        let r = 0.6;
        let c = build_cech(&s, r, 3).unwrap();
        assert!(c.is_downward_closed());
        let g = build_neighbor_graph(&s, 2.0 * r).unwrap();
        for j in 1..=3 {
            for sx in c.simplices(j).iter() {
                for a in 0..sx.len() {
                    for b in a + 1..sx.len() {
                        assert!(g.has_edge(sx[a] as usize, sx[b] as usize));
                    }
                }
                let p: Vec<&[f64]> = sx.iter().map(|&v| s.point(v as usize)).collect();
                assert!(cech_simplex_test(&p, r));
            }
        }
        assert!(c.count(3) > 0);
    }

    #[test]
    fn zero_radius_gives_isolated_vertices() {
        let s = triangle();
        assert_eq!(count_simplices(&build_cech(&s, 0.0, 2).unwrap()).0, vec![3, 0, 0]);
    }

    #[test]
    fn sub_universe_labels() {
        let w = Window::cube(2, 5.0).unwrap();
        let s = sample_homogeneous_poisson(2.0, &w, 3).unwrap();
        let keep: Vec<u32> = (0..s.len() as u32).filter(|v| v % 2 == 0).collect();
        let sub = build_cech_on(&s, &keep, s.len(), 0.7, 2).unwrap();
        let full = build_cech(&s, 0.7, 2).unwrap();
        assert_eq!(sub, crate::complex::restrict_to_vertices(&full, &keep));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn radius_monotone_and_translation_invariant(seed in 0u64..1000, r1 in 0.1f64..1.0, dr in 0.0f64..0.5) {
            let w = Window::cube(2, 6.0).unwrap();
            let s = sample_homogeneous_poisson(1.5, &w, seed).unwrap();
            let a = build_cech(&s, r1, 2).unwrap();
            let b = build_cech(&s, r1 + dr, 2).unwrap();
            prop_assert!(a.is_subcomplex_of(&b));
            let t = build_cech(&s.translate(&[0.25, -0.5]), r1, 2).unwrap();
            prop_assert_eq!(a.levels(), t.levels());
        }
    }
}
