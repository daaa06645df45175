//! Random Čech complexes over point processes, exact homology over prime
//! fields, and a Monte Carlo harness for their limit behavior.

// links LAPACK and the system OpenBLAS
extern crate lapack_src;

pub mod cli;
pub mod complex;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod homology;
pub mod point_process;
pub mod rng;
pub mod stabilization;

pub use error::{Error, Result};
