use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Volume of the unit ball in R^d.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowKind {
    /// `[-side/2, side/2)^d`.
    Cube { side: f64 },
    /// Closed ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// `[lower_i, upper_i)` on every axis.
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

/// Observation window in R^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    dim: usize,
    #[serde(flatten)]
    kind: WindowKind,
}

impl Window {
    pub fn new(dim: usize, kind: WindowKind) -> Result<Self> {
        let w = Window { dim, kind };
        w.validate()?;
        Ok(w)
    }

    pub fn cube(dim: usize, side: f64) -> Result<Self> {
        Self::new(dim, WindowKind::Cube { side })
    }

    /// Ball centered at the origin.
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::new(dim, WindowKind::Ball { center: vec![0.0; dim], radius })
    }

    pub fn ball_at(center: &[f64], radius: f64) -> Result<Self> {
        Self::new(center.len(), WindowKind::Ball { center: center.to_vec(), radius })
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(lower.len(), WindowKind::Box { lower, upper })
    }

    /// The unit-volume box `[0,1)^d`.
    pub fn unit_box(dim: usize) -> Self {
        Window { dim, kind: WindowKind::Box { lower: vec![0.0; dim], upper: vec![1.0; dim] } }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::DegenerateWindow("dimension must be at least 1".into()));
        }
        let ok = |x: f64| x.is_finite() && x > 0.0;
        match &self.kind {
            WindowKind::Cube { side } if !ok(*side) => {
                Err(Error::DegenerateWindow(format!("cube side {side} must be positive")))
            }
            WindowKind::Ball { center, radius } => {
                if center.len() != self.dim || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::DegenerateWindow("ball center has wrong dimension".into()));
                }
                if !ok(*radius) {
                    return Err(Error::DegenerateWindow(format!("ball radius {radius} must be positive")));
                }
                Ok(())
            }
            WindowKind::Box { lower, upper } => {
                if lower.len() != self.dim || upper.len() != self.dim {
                    return Err(Error::DegenerateWindow("box bounds have wrong dimension".into()));
                }
                for (a, b) in lower.iter().zip(upper) {
                    if !(a.is_finite() && b.is_finite() && b > a) {
                        return Err(Error::DegenerateWindow(format!("box extent [{a}, {b}) is empty")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &WindowKind {
        &self.kind
    }

    pub fn volume(&self) -> f64 {
        match &self.kind {
            WindowKind::Cube { side } => side.powi(self.dim as i32),
            WindowKind::Ball { radius, .. } => unit_ball_volume(self.dim) * radius.powi(self.dim as i32),
            WindowKind::Box { lower, upper } => lower.iter().zip(upper).map(|(a, b)| b - a).product(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            WindowKind::Cube { side } => {
                let h = side / 2.0;
                x.iter().all(|&c| -h <= c && c < h)
            }
            WindowKind::Ball { center, radius } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                d2 <= radius * radius
            }
            WindowKind::Box { lower, upper } => {
                x.iter().zip(lower.iter().zip(upper)).all(|(&c, (&a, &b))| a <= c && c < b)
            }
        }
    }

    /// Axis-aligned bounding box `(lower, upper)`.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.kind {
            WindowKind::Cube { side } => (vec![-side / 2.0; self.dim], vec![side / 2.0; self.dim]),
            WindowKind::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            WindowKind::Box { lower, upper } => (lower.clone(), upper.clone()),
        }
    }

    pub fn center(&self) -> Vec<f64> {
        match &self.kind {
            WindowKind::Cube { .. } => vec![0.0; self.dim],
            WindowKind::Ball { center, .. } => center.clone(),
            WindowKind::Box { lower, upper } => lower.iter().zip(upper).map(|(a, b)| 0.5 * (a + b)).collect(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.kind {
            WindowKind::Ball { radius, .. } => 2.0 * radius,
            _ => {
                let (lo, hi) = self.bounds();
                lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
            }
        }
    }

    /// Euclidean distance from an interior point to the window boundary.
    pub fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        match &self.kind {
            WindowKind::Ball { center, radius } => {
                let d: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                radius - d
            }
            _ => {
                let (lo, hi) = self.bounds();
                x.iter()
                    .zip(lo.iter().zip(&hi))
                    .map(|(&c, (&a, &b))| (c - a).min(b - c))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Window shrunk by `margin` on every side.
    pub fn shrink(&self, margin: f64) -> Result<Window> {
        let kind = match &self.kind {
            WindowKind::Cube { side } => WindowKind::Cube { side: side - 2.0 * margin },
            WindowKind::Ball { center, radius } => WindowKind::Ball { center: center.clone(), radius: radius - margin },
            WindowKind::Box { lower, upper } => WindowKind::Box {
                lower: lower.iter().map(|a| a + margin).collect(),
                upper: upper.iter().map(|b| b - margin).collect(),
            },
        };
        Window::new(self.dim, kind)
    }

    /// Volume of the set of points within distance `r` of the boundary, on
    /// either side (Steiner formula for boxes).
    pub fn boundary_shell_volume(&self, r: f64) -> f64 {
        let d = self.dim;
        match &self.kind {
            WindowKind::Ball { radius, .. } => {
                let w = unit_ball_volume(d);
                w * ((radius + r).powi(d as i32) - (radius - r).max(0.0).powi(d as i32))
            }
            _ => {
                let (lo, hi) = self.bounds();
                let sides: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
                let mut outer = 0.0;
                for mask in 0u32..(1 << d) {
                    let j = mask.count_ones() as usize;
                    let mut term = unit_ball_volume(j) * r.powi(j as i32);
                    for (i, s) in sides.iter().enumerate() {
                        if mask & (1 << i) == 0 {
                            term *= s;
                        }
                    }
                    outer += term;
                }
                let inner: f64 = sides.iter().map(|s| (s - 2.0 * r).max(0.0)).product();
                outer - inner
            }
        }
    }

    /// Draw one point uniformly from the window, appending its coordinates.
    pub fn sample_uniform(&self, rng: &mut Rng, out: &mut Vec<f64>) {
        let start = out.len();
        loop {
            out.truncate(start);
            match &self.kind {
                WindowKind::Ball { center, radius } => {
                    let g: Vec<f64> = (0..self.dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let u: f64 = rng.gen();
                    let rad = radius * u.powf(1.0 / self.dim as f64);
                    if norm == 0.0 {
                        continue;
                    }
                    out.extend(g.iter().zip(center).map(|(v, c)| c + rad * v / norm));
                }
                _ => {
                    let (lo, hi) = self.bounds();
                    out.extend(lo.iter().zip(&hi).map(|(a, b)| a + (b - a) * rng.gen::<f64>()));
                }
            }
            // rounding can land exactly on an open face
            if self.contains(&out[start..]) {
                return;
            }
        }
    }
}

/// Family of windows `B_n` with `|B_n| = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowSequence {
    Cubes { dim: usize },
    Balls { dim: usize },
}

impl WindowSequence {
    pub fn dim(&self) -> usize {
        match *self {
            WindowSequence::Cubes { dim } | WindowSequence::Balls { dim } => dim,
        }
    }

    pub fn window(&self, n: u64) -> Result<Window> {
        if n == 0 {
            return Err(Error::invalid("window sequence index must be >= 1"));
        }
        let d = self.dim() as f64;
        match *self {
            WindowSequence::Cubes { dim } => Window::cube(dim, (n as f64).powf(1.0 / d)),
            WindowSequence::Balls { dim } => {
                Window::ball(dim, (n as f64 / unit_ball_volume(dim)).powf(1.0 / d))
            }
        }
    }

    /// Constant `b_1` with `diam(B_n) <= b_1 n^{b_1}` for every n >= 1.
    pub fn diameter_constant(&self) -> f64 {
        let d = self.dim() as f64;
        let lead = match *self {
            WindowSequence::Cubes { .. } => d.sqrt(),
            WindowSequence::Balls { dim } => 2.0 * unit_ball_volume(dim).powf(-1.0 / d),
        };
        lead.max(1.0 / d).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_is_half_open() {
        let w = Window::cube(2, 2.0).unwrap();
        assert!(w.contains(&[-1.0, -1.0]));
        assert!(!w.contains(&[1.0, 0.0]));
        assert!(!w.contains(&[0.0, 1.0]));
    }

    #[test]
    fn degenerate_windows_rejected() {
        assert!(matches!(Window::cube(2, 0.0), Err(Error::DegenerateWindow(_))));
        assert!(Window::ball(3, -1.0).is_err());
        assert!(Window::boxed(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(Window::cube(0, 1.0).is_err());
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn sequence_volume_is_exact() {
        for seq in [WindowSequence::Cubes { dim: 2 }, WindowSequence::Balls { dim: 3 }] {
            for n in [1u64, 10, 1000] {
                let v = seq.window(n).unwrap().volume();
                assert!((v - n as f64).abs() <= 1e-12 * n as f64, "{seq:?} n={n} v={v}");
                let diam = seq.window(n).unwrap().diameter();
                let b1 = seq.diameter_constant();
                assert!(diam <= b1 * (n as f64).powf(b1));
            }
        }
    }

    #[test]
    fn shell_fraction_decreases_under_doubling() {
        let seq = WindowSequence::Cubes { dim: 2 };
        let frac: Vec<f64> = (0..4)
            .map(|i| {
                let n = 100u64 << i;
                seq.window(n).unwrap().boundary_shell_volume(1.0) / n as f64
            })
            .collect();
        assert!(frac.windows(2).all(|w| w[1] < w[0]), "{frac:?}");
    }

    #[test]
    fn shell_volume_of_square() {
        // outer: l^2 + 4 l r + pi r^2, inner: (l-2r)^2
        let w = Window::cube(2, 10.0).unwrap();
        let expected = 100.0 + 40.0 + std::f64::consts::PI - 64.0;
        assert!((w.boundary_shell_volume(1.0) - expected).abs() < 1e-12);
    }
}
