//! Independent oracles shared by the integration tests: dense linear algebra
//! over GF(p), brute-force Čech enumeration and seeded random inputs.

#![allow(dead_code)]

use cechkit::complex::SimplicialComplex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Dense matrix over GF(p), row-major.
#[derive(Clone, Debug)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    pub a: Vec<u64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        Dense { rows, cols, p, a: vec![0; rows * cols] }
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.cols + j] = v.rem_euclid(self.p as i64) as u64;
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(piv) = (row..self.rows).find(|&i| self.at(i, col) != 0) else { continue };
            for j in 0..self.cols {
                self.a.swap(piv * self.cols + j, row * self.cols + j);
            }
            let s = inv(self.at(row, col), p);
            for j in 0..self.cols {
                self.a[row * self.cols + j] = self.a[row * self.cols + j] * s % p;
            }
            for i in 0..self.rows {
                let f = self.at(i, col);
                if i != row && f != 0 {
                    for j in 0..self.cols {
                        let v = (self.at(i, j) + p * p - f * self.at(row, j)) % p;
                        self.a[i * self.cols + j] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, as column vectors.
    pub fn null_space(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.at(r, f)) % p;
                }
                v
            })
            .collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<u64>], p: u64) -> Self {
        let mut m = Dense::zeros(rows, cols.len(), p);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.a[i * m.cols + j] = c[i] % p;
            }
        }
        m
    }
}

/// Boundary matrix ∂_k (rows: (k−1)-simplices, cols: k-simplices) with the
/// standard alternating signs, built from the vertex lists alone.
pub fn boundary(c: &SimplicialComplex, k: usize, p: u64) -> Dense {
    let faces: Vec<&[u32]> = c.simplices(k - 1).iter().collect();
    let cells: Vec<&[u32]> = c.simplices(k).iter().collect();
    let mut m = Dense::zeros(faces.len(), cells.len(), p);
    for (j, s) in cells.iter().enumerate() {
        for drop in 0..s.len() {
            let face: Vec<u32> = s.iter().enumerate().filter(|e| e.0 != drop).map(|e| *e.1).collect();
            let i = faces.iter().position(|f| *f == face.as_slice()).expect("face present");
            m.set(i, j, if drop % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

fn level(c: &SimplicialComplex, k: usize) -> usize {
    if k <= c.k_cap() {
        c.count(k)
    } else {
        0
    }
}

fn boundary_rank(c: &SimplicialComplex, k: usize, p: u64) -> usize {
    if k == 0 || k > c.k_cap() || level(c, k) == 0 || level(c, k - 1) == 0 {
        0
    } else {
        boundary(c, k, p).rank()
    }
}

/// Betti numbers of the stored skeleton: n_k − rank ∂_k − rank ∂_{k+1}.
pub fn betti(c: &SimplicialComplex, p: u64) -> Vec<usize> {
    (0..=c.k_cap())
        .map(|k| level(c, k) - boundary_rank(c, k, p) - boundary_rank(c, k + 1, p))
        .collect()
}

/// Cycles Z_k as column vectors indexed by the k-simplices of `c`.
pub fn cycles(c: &SimplicialComplex, k: usize, p: u64) -> Vec<Vec<u64>> {
    let n = level(c, k);
    if k == 0 || level(c, k - 1) == 0 {
        return (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
    }
    boundary(c, k, p).null_space()
}

/// Boundaries B_k as column vectors indexed by the k-simplices of `c`.
pub fn boundaries(c: &SimplicialComplex, k: usize, p: u64) -> Vec<Vec<u64>> {
    if k + 1 > c.k_cap() || level(c, k + 1) == 0 {
        return Vec::new();
    }
    let m = boundary(c, k + 1, p);
    (0..m.cols).map(|j| (0..m.rows).map(|i| m.at(i, j)).collect()).collect()
}

/// Re-indexes a chain of `sub` as a chain of `sup`.
pub fn push_chain(sub: &SimplicialComplex, sup: &SimplicialComplex, k: usize, v: &[u64]) -> Vec<u64> {
    let mut out = vec![0; level(sup, k)];
    for (i, s) in sub.simplices(k).iter().enumerate() {
        out[sup.simplices(k).index_of(s).expect("subcomplex")] = v[i];
    }
    out
}

/// Basis of span(U) ∩ span(V) in a space of dimension `dim`.
pub fn intersect(u: &[Vec<u64>], v: &[Vec<u64>], dim: usize, p: u64) -> Vec<Vec<u64>> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vec<u64>> = u.to_vec();
    cols.extend(v.iter().map(|c| c.iter().map(|&x| (p - x % p) % p).collect()));
    let m = Dense::from_columns(dim, &cols, p);
    let span: Vec<Vec<u64>> = m
        .null_space()
        .iter()
        .map(|x| {
            let mut w = vec![0u64; dim];
            for (j, uj) in u.iter().enumerate() {
                for i in 0..dim {
                    w[i] = (w[i] + x[j] * uj[i]) % p;
                }
            }
            w
        })
        .collect();
    basis_of(&span, dim, p)
}

pub fn basis_of(vs: &[Vec<u64>], dim: usize, p: u64) -> Vec<Vec<u64>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let m = Dense::from_columns(dim, vs, p);
    let mut t = Dense::zeros(vs.len(), dim, p);
    for i in 0..dim {
        for j in 0..vs.len() {
            t.a[j * dim + i] = m.at(i, j);
        }
    }
    let r = t.rref().len();
    (0..r).map(|row| t.a[row * dim..(row + 1) * dim].to_vec()).collect()
}

/// Kernel rank of H_k(L) → H_k(K1) ⊕ H_k(K2) as
/// dim(Z_k(L) ∩ B_k(K1) ∩ B_k(K2)) − dim B_k(L), with everything pushed
/// into the chain space of the union.
pub fn mv_kernel(l: &SimplicialComplex, k1: &SimplicialComplex, k2: &SimplicialComplex, u: &SimplicialComplex, k: usize, p: u64) -> usize {
    let dim = level(u, k);
    let lift = |c: &SimplicialComplex, vs: Vec<Vec<u64>>| -> Vec<Vec<u64>> {
        vs.iter().map(|v| push_chain(c, u, k, v)).collect()
    };
    let z = lift(l, cycles(l, k, p));
    let b1 = lift(k1, boundaries(k1, k, p));
    let b2 = lift(k2, boundaries(k2, k, p));
    let bl = basis_of(&lift(l, boundaries(l, k, p)), dim, p).len();
    let zb = intersect(&intersect(&z, &b1, dim, p), &b2, dim, p);
    zb.len() - bl
}

/// All subsets of at most `k_cap + 1` points whose minimum enclosing ball has
/// radius ≤ r, decided by an independent test: the smallest ball containing a
/// set is determined by at most d+1 of its points, so a set is accepted when
/// some ball through ≤ 3 of its points (d = 2) of radius ≤ r contains all.
pub fn brute_cech_2d(pts: &[[f64; 2]], r: f64, k_cap: usize) -> Vec<Vec<u32>> {
    let n = pts.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let verts: Vec<u32> = (0..n as u32).filter(|i| mask & (1 << i) != 0).collect();
        if verts.len() > k_cap + 1 {
            continue;
        }
        let set: Vec<[f64; 2]> = verts.iter().map(|&i| pts[i as usize]).collect();
        if meb_radius_2d(&set) <= r * (1.0 + 1e-12) {
            out.push(verts);
        }
    }
    out
}

/// Smallest enclosing radius by exhausting candidate balls on 1-3 points.
pub fn meb_radius_2d(set: &[[f64; 2]]) -> f64 {
    let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let covers = |c: [f64; 2], rad: f64| set.iter().all(|&q| d(c, q) <= rad * (1.0 + 1e-9) + 1e-12);
    let mut best = f64::INFINITY;
    if set.len() == 1 {
        return 0.0;
    }
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let c = [(set[i][0] + set[j][0]) / 2.0, (set[i][1] + set[j][1]) / 2.0];
            let rad = d(c, set[i]);
            if rad < best && covers(c, rad) {
                best = rad;
            }
            for k in j + 1..set.len() {
                let (a, b, cc) = (set[i], set[j], set[k]);
                let den = 2.0 * (a[0] * (b[1] - cc[1]) + b[0] * (cc[1] - a[1]) + cc[0] * (a[1] - b[1]));
                if den.abs() < 1e-14 {
                    continue;
                }
                let sq = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
                let ux = (sq(a) * (b[1] - cc[1]) + sq(b) * (cc[1] - a[1]) + sq(cc) * (a[1] - b[1])) / den;
                let uy = (sq(a) * (cc[0] - b[0]) + sq(b) * (a[0] - cc[0]) + sq(cc) * (b[0] - a[0])) / den;
                let c = [ux, uy];
                let rad = d(c, a);
                if rad < best && covers(c, rad) {
                    best = rad;
                }
            }
        }
    }
    best
}

pub fn random_points_2d(rng: &mut ChaCha8Rng, n: usize, side: f64) -> Vec<[f64; 2]> {
    (0..n).map(|_| [rng.gen_range(0.0..side), rng.gen_range(0.0..side)]).collect()
}

/// Random abstract complex on `n` vertices: the closure of between one and
/// `max_generators` random simplices of dimension ≤ `top`.
pub fn random_complex(rng: &mut ChaCha8Rng, n: usize, top: usize, max_generators: usize) -> SimplicialComplex {
    let generators = rng.gen_range(1..=max_generators);
    let lists: Vec<Vec<u32>> = (0..generators)
        .map(|_| {
            let size = rng.gen_range(1..=top + 1).min(n);
            let mut vs: Vec<u32> = Vec::new();
            while vs.len() < size {
                let v = rng.gen_range(0..n as u32);
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
            vs
        })
        .collect();
    SimplicialComplex::from_vertex_lists(n, top, &lists).unwrap()
}
