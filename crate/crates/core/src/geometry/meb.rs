//! Minimum enclosing balls.
//!
//! Welzl's recursion with the move-to-front heuristic, working on fixed-size
//! stack buffers so the Čech predicate does not allocate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ambient dimension supported by the exact predicates.
pub const MAX_DIM: usize = 16;

/// Relative slack used for containment tests and the closed-ball convention.
const REL_TOL: f64 = 1e-12;

/// Pivot threshold below which a support set is treated as affinely dependent.
const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, x: &[f64]) -> bool {
        let d2: f64 = x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        d2 <= self.radius * self.radius * (1.0 + 2.0 * REL_TOL) + f64::MIN_POSITIVE
    }
}

/// Minimum enclosing ball together with the indices of a support set.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportedBall {
    pub ball: Ball,
    pub support: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Sphere {
    center: [f64; MAX_DIM],
    r2: f64,
}

impl Sphere {
    const EMPTY: Sphere = Sphere { center: [0.0; MAX_DIM], r2: -1.0 };

    fn contains(&self, p: &[f64]) -> bool {
        if self.r2 < 0.0 {
            return false;
        }
        let d2: f64 = p.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        d2 <= self.r2 * (1.0 + 2.0 * REL_TOL)
    }
}

/// Smallest sphere through the support points, centered in their affine hull.
/// Returns `None` when the support is affinely dependent.
fn circumsphere(pts: &[&[f64]], support: &[usize]) -> Option<Sphere> {
    let d = pts[0].len();
    let mut s = Sphere::EMPTY;
    match support.len() {
        0 => return Some(s),
        1 => {
            s.center[..d].copy_from_slice(pts[support[0]]);
            s.r2 = 0.0;
            return Some(s);
        }
        _ => {}
    }
    let q0 = pts[support[0]];
    let m = support.len() - 1;
    let mut a = [[0.0f64; MAX_DIM]; MAX_DIM];
    for (i, &si) in support[1..].iter().enumerate() {
        for k in 0..d {
            a[i][k] = pts[si][k] - q0[k];
        }
    }
    // Gram system 2 a_i.a_j x_j = |a_i|^2
    let mut g = [[0.0f64; MAX_DIM + 1]; MAX_DIM];
    let mut scale = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            g[i][j] = 2.0 * dot(&a[i][..d], &a[j][..d]);
        }
        g[i][m] = dot(&a[i][..d], &a[i][..d]);
        scale = scale.max(g[i][i]);
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| g[x][col].abs().total_cmp(&g[y][col].abs()))?;
        if g[piv][col].abs() <= DEGENERACY_TOL * scale {
            return None;
        }
        g.swap(col, piv);
        for row in 0..m {
            if row != col {
                let f = g[row][col] / g[col][col];
                if f != 0.0 {
                    for k in col..=m {
                        g[row][k] -= f * g[col][k];
                    }
                }
            }
        }
    }
    let mut offset = [0.0f64; MAX_DIM];
    for i in 0..m {
        let lam = g[i][m] / g[i][i];
        for k in 0..d {
            offset[k] += lam * a[i][k];
        }
    }
    for k in 0..d {
        s.center[k] = q0[k] + offset[k];
    }
    s.r2 = dot(&offset[..d], &offset[..d]);
    // the center must be equidistant from every support point
    Some(s)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fallback for affinely dependent supports: smallest valid sphere through an
/// affinely independent subset that still encloses every support point.
fn degenerate_support_sphere(pts: &[&[f64]], support: &[usize]) -> Sphere {
    let m = support.len();
    let mut best = Sphere::EMPTY;
    let mut best_r2 = f64::INFINITY;
    for mask in 1u32..(1 << m) {
        let sub: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| support[i]).collect();
        if let Some(s) = circumsphere(pts, &sub) {
            if s.r2 < best_r2 && support.iter().all(|&i| s.contains(pts[i])) {
                best = s;
                best_r2 = s.r2;
            }
        }
    }
    best
}

fn mtf(pts: &[&[f64]], order: &mut [usize], end: usize, support: &mut Vec<usize>, d: usize) -> (Sphere, Vec<usize>) {
    let mut ball = circumsphere(pts, support).unwrap_or_else(|| degenerate_support_sphere(pts, support));
    let mut best_support = support.clone();
    if support.len() == d + 1 {
        return (ball, best_support);
    }
    for i in 0..end {
        let p = order[i];
        if !ball.contains(pts[p]) {
            support.push(p);
            let (b, s) = mtf(pts, order, i, support, d);
            support.pop();
            ball = b;
            best_support = s;
            order[..=i].rotate_right(1);
        }
    }
    (ball, best_support)
}

fn solve(pts: &[&[f64]]) -> Result<(Sphere, Vec<usize>)> {
    let Some(first) = pts.first() else {
        return Err(Error::invalid("minimum enclosing ball of an empty set"));
    };
    let d = first.len();
    if d == 0 || d > MAX_DIM {
        return Err(Error::invalid(format!("dimension {d} outside 1..={MAX_DIM}")));
    }
    if pts.iter().any(|p| p.len() != d) {
        return Err(Error::invalid("points have mixed dimensions"));
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut support = Vec::with_capacity(d + 1);
    Ok(mtf(pts, &mut order, pts.len(), &mut support, d))
}

/// Smallest ball containing all `points`.
pub fn min_enclosing_ball(points: &[&[f64]]) -> Result<Ball> {
    Ok(min_enclosing_ball_with_support(points)?.ball)
}

pub fn min_enclosing_ball_with_support(points: &[&[f64]]) -> Result<SupportedBall> {
    let (s, mut support) = solve(points)?;
    let d = points[0].len();
    support.sort_unstable();
    Ok(SupportedBall { ball: Ball { center: s.center[..d].to_vec(), radius: s.r2.max(0.0).sqrt() }, support })
}

/// Squared radius of the minimum enclosing ball; no allocation beyond the
/// index buffer.
pub(crate) fn meb_radius2(points: &[&[f64]]) -> f64 {
    match points.len() {
        1 => 0.0,
        2 => 0.25 * dist2(points[0], points[1]),
        _ => solve(points).map(|(s, _)| s.r2.max(0.0)).unwrap_or(f64::INFINITY),
    }
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Whether the closed radius-`r` balls around `points` share a common point.
pub fn cech_simplex_test(points: &[&[f64]], r: f64) -> bool {
    match points.len() {
        0 => false,
        1 => r >= 0.0,
        // pairs use the exact threshold so the 1-skeleton matches the neighbor graph
        2 => dist2(points[0], points[1]) <= 4.0 * r * r,
        _ => meb_radius2(points) <= r * r * (1.0 + 2.0 * REL_TOL),
    }
}
