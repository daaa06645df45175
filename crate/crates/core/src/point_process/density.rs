use serde::{Deserialize, Serialize};

use super::window::{Window, WindowKind};
use crate::error::{Error, Result};

/// Safety factor applied to the tabulated maximum when used as a rejection bound.
pub const GRID_BOUND_SAFETY: f64 = 1.01;

/// Normalization tolerance for tabulated densities.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Nonnegative values on a regular node grid spanning the support's bounding
/// box, evaluated by multilinear interpolation. The last axis varies fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    pub nodes: Vec<usize>,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DensityEvaluator {
    Uniform,
    Grid(GridDensity),
}

/// Probability density with compact support and recorded bounds `f_*`, `f^*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    support: Window,
    evaluator: DensityEvaluator,
    lower: f64,
    upper: f64,
}

impl DensitySpec {
    pub fn uniform(support: Window) -> Self {
        let f = 1.0 / support.volume();
        DensitySpec { support, evaluator: DensityEvaluator::Uniform, lower: f, upper: f }
    }

    /// Uniform density on the centered cube of unit volume.
    pub fn unit_cube(dim: usize) -> Self {
        Self::uniform(Window::cube(dim, 1.0).expect("unit cube"))
    }

    pub fn from_grid(support: Window, grid: GridDensity) -> Result<Self> {
        if matches!(support.kind(), WindowKind::Ball { .. }) {
            return Err(Error::invalid("tabulated densities need a cube or box support"));
        }
        let d = support.dim();
        if grid.nodes.len() != d || grid.nodes.iter().any(|&n| n < 2) {
            return Err(Error::invalid("grid needs at least two nodes per axis"));
        }
        if grid.values.len() != grid.nodes.iter().product::<usize>() {
            return Err(Error::invalid("grid value count does not match node shape"));
        }
        if grid.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("density values must be finite and nonnegative"));
        }
        let lower = grid.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = grid.values.iter().cloned().fold(0.0, f64::max);
        if max <= 0.0 {
            return Err(Error::invalid("density is identically zero"));
        }
        let spec = DensitySpec { support, evaluator: DensityEvaluator::Grid(grid), lower, upper: max * GRID_BOUND_SAFETY };
        let mass = spec.integral();
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!("density integrates to {mass}, expected 1")));
        }
        Ok(spec)
    }

    /// Tabulate `f` on `nodes` points per axis over the support's bounding box.
    pub fn tabulate(support: Window, nodes: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let d = support.dim();
        let (lo, hi) = support.bounds();
        let shape = vec![nodes; d];
        let total = nodes.pow(d as u32);
        let mut values = Vec::with_capacity(total);
        let mut x = vec![0.0; d];
        for flat in 0..total {
            let mut rem = flat;
            for axis in (0..d).rev() {
                let i = rem % nodes;
                rem /= nodes;
                x[axis] = lo[axis] + (hi[axis] - lo[axis]) * i as f64 / (nodes - 1) as f64;
            }
            values.push(f(&x));
        }
        Self::from_grid(support, GridDensity { nodes: shape, values })
    }

    pub fn support(&self) -> &Window {
        &self.support
    }

    pub fn evaluator(&self) -> &DensityEvaluator {
        &self.evaluator
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.evaluator, DensityEvaluator::Uniform)
    }

    /// `f_*`: infimum over the support.
    pub fn lower_bound(&self) -> f64 {
        self.lower
    }

    /// `f^*`: rejection/thinning bound.
    pub fn upper_bound(&self) -> f64 {
        self.upper
    }

    /// Whether `0 < f_* <= f^* < inf` holds.
    pub fn is_bounded_away_from_zero(&self) -> bool {
        self.lower > 0.0 && self.lower <= self.upper && self.upper.is_finite()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if !self.support.contains(x) {
            return 0.0;
        }
        match &self.evaluator {
            DensityEvaluator::Uniform => self.lower,
            DensityEvaluator::Grid(g) => {
                let (lo, hi) = self.support.bounds();
                let d = x.len();
                let mut base = 0usize;
                let mut frac = vec![0.0; d];
                let mut strides = vec![1usize; d];
                for axis in (0..d.saturating_sub(1)).rev() {
                    strides[axis] = strides[axis + 1] * g.nodes[axis + 1];
                }
                for axis in 0..d {
                    let cells = (g.nodes[axis] - 1) as f64;
                    let t = ((x[axis] - lo[axis]) / (hi[axis] - lo[axis]) * cells).clamp(0.0, cells);
                    let i = (t.floor() as usize).min(g.nodes[axis] - 2);
                    frac[axis] = t - i as f64;
                    base += i * strides[axis];
                }
                let mut acc = 0.0;
                for corner in 0u32..(1 << d) {
                    let mut w = 1.0;
                    let mut idx = base;
                    for axis in 0..d {
                        if corner & (1 << axis) != 0 {
                            w *= frac[axis];
                            idx += strides[axis];
                        } else {
                            w *= 1.0 - frac[axis];
                        }
                    }
                    if w != 0.0 {
                        acc += w * g.values[idx];
                    }
                }
                acc
            }
        }
    }

    /// Exact integral of the interpolant (product trapezoid rule on the nodes).
    pub fn integral(&self) -> f64 {
        match &self.evaluator {
            DensityEvaluator::Uniform => self.lower * self.support.volume(),
            DensityEvaluator::Grid(g) => {
                let (lo, hi) = self.support.bounds();
                let d = g.nodes.len();
                let cell: f64 = (0..d).map(|a| (hi[a] - lo[a]) / (g.nodes[a] - 1) as f64).product();
                let mut sum = 0.0;
                for (flat, v) in g.values.iter().enumerate() {
                    let mut rem = flat;
                    let mut w = 1.0;
                    for axis in (0..d).rev() {
                        let i = rem % g.nodes[axis];
                        rem /= g.nodes[axis];
                        if i == 0 || i == g.nodes[axis] - 1 {
                            w *= 0.5;
                        }
                    }
                    sum += w * v;
                }
                sum * cell
            }
        }
    }
}
