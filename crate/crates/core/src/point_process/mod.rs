//! Point-process samplers.
//!
//! All samplers are pure functions of their arguments and a 64-bit seed; the
//! seed is expanded into independent streams (count, positions, thinning)
//! through [`crate::rng`].

mod density;
mod ginibre;
pub mod io;
mod sample;
mod samplers;
mod window;

pub use density::{DensityEvaluator, DensitySpec, GridDensity, GRID_BOUND_SAFETY, NORMALIZATION_TOL};
pub use ginibre::{bulk_radius, sample_ginibre, sample_ginibre_capped, DEFAULT_MAX_ORDER};
pub use sample::{restrict, DensityTag, PointSample, ProcessTag};
pub use samplers::{
    sample_binomial, sample_coupled_poisson_binomial, sample_extended_binomial, sample_homogeneous_poisson,
    sample_inhomogeneous_poisson, sample_poisson_on_sequence,
};
pub use window::{unit_ball_volume, Window, WindowKind, WindowSequence};
