use serde::{Deserialize, Serialize};

use super::window::{Window, WindowSequence};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DensityTag {
    Uniform,
    Tabulated { lower: f64, upper: f64 },
}

/// Which process produced a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "snake_case")]
pub enum ProcessTag {
    Poisson { intensity: f64 },
    Binomial { n: u64, density: DensityTag },
    InhomPoisson { n: f64, density: DensityTag },
    ExtendedBinomial { n: u64, sequence: WindowSequence },
    Ginibre { order: usize, bulk_radius: f64 },
    Manual,
}

/// Finite point configuration in R^d.
///
/// Coordinates are stored flat, point `i` at `coords[i*dim..(i+1)*dim]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSample {
    dim: usize,
    coords: Vec<f64>,
    window: Window,
    seed: u64,
    process: ProcessTag,
}

impl PointSample {
    pub(crate) fn from_parts(coords: Vec<f64>, window: Window, seed: u64, process: ProcessTag) -> Self {
        let dim = window.dim();
        debug_assert_eq!(coords.len() % dim, 0);
        PointSample { dim, coords, window, seed, process }
    }

    /// Wrap user-supplied points. Points must be distinct and inside `window`.
    pub fn manual(points: &[Vec<f64>], window: Window) -> Result<Self> {
        let dim = window.dim();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::invalid(format!("point {i} has dimension {}, expected {dim}", p.len())));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid(format!("point {i} has a non-finite coordinate")));
            }
            if !window.contains(p) {
                return Err(Error::invalid(format!("point {i} lies outside the window")));
            }
            coords.extend_from_slice(p);
        }
        let s = PointSample { dim, coords, window, seed: 0, process: ProcessTag::Manual };
        if let Some((a, b)) = s.first_duplicate() {
            return Err(Error::invalid(format!("points {a} and {b} coincide")));
        }
        Ok(s)
    }

    /// Manual sample whose window is the tight bounding box (slightly padded).
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).ok_or_else(|| Error::invalid("no points given"))?;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in points {
            if p.len() != dim {
                return Err(Error::invalid("points have mixed dimensions"));
            }
            for (a, &c) in p.iter().enumerate() {
                lo[a] = lo[a].min(c);
                hi[a] = hi[a].max(c);
            }
        }
        for a in 0..dim {
            let pad = 1.0 + 1e-9 * (hi[a] - lo[a]).abs().max(lo[a].abs()).max(hi[a].abs());
            lo[a] -= pad;
            hi[a] += pad;
        }
        Self::manual(points, Window::boxed(lo, hi)?)
    }

    pub fn empty(window: Window) -> Self {
        PointSample { dim: window.dim(), coords: Vec::new(), window, seed: 0, process: ProcessTag::Manual }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn process(&self) -> &ProcessTag {
        &self.process
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    /// Indices of the first pair of coinciding points, if any.
    pub fn first_duplicate(&self) -> Option<(usize, usize)> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        idx.windows(2).find(|w| self.point(w[0]) == self.point(w[1])).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// Points of `self` inside `region`; the window becomes `region`.
    pub fn restrict(&self, region: &Window) -> PointSample {
        let coords = self.points().filter(|p| region.contains(p)).flatten().copied().collect();
        PointSample {
            dim: self.dim,
            coords,
            window: region.clone(),
            seed: self.seed,
            process: self.process.clone(),
        }
    }

    /// Indices of the points inside `region`.
    pub fn indices_in(&self, region: &Window) -> Vec<usize> {
        (0..self.len()).filter(|&i| region.contains(self.point(i))).collect()
    }

    /// Sample with one extra point appended (window unchanged).
    pub fn with_point(&self, x: &[f64]) -> PointSample {
        let mut out = self.clone();
        out.coords.extend_from_slice(x);
        out
    }

    /// Concatenate the points of two samples of the same dimension.
    pub fn union(&self, other: &PointSample) -> PointSample {
        let mut out = self.clone();
        out.coords.extend_from_slice(&other.coords);
        out.process = ProcessTag::Manual;
        out
    }

    pub fn subset(&self, indices: &[usize]) -> PointSample {
        let mut out = self.clone();
        out.coords = indices.iter().flat_map(|&i| self.point(i).iter().copied()).collect();
        out
    }

    pub fn translate(&self, shift: &[f64]) -> PointSample {
        let mut out = self.clone();
        for p in out.coords.chunks_exact_mut(self.dim) {
            for (c, s) in p.iter_mut().zip(shift) {
                *c += s;
            }
        }
        out.process = ProcessTag::Manual;
        out
    }
}

/// Restrict a sample to a region.
pub fn restrict(s: &PointSample, region: &Window) -> PointSample {
    s.restrict(region)
}
