//! Truncated Ginibre ensemble.
//!
//! Eigenvalues of an `N x N` matrix with iid standard complex Gaussian
//! entries fill the disk of radius `sqrt(N)` with density `1/pi`; dividing by
//! `sqrt(pi)` gives unit intensity on the disk of radius `sqrt(N/pi)`.

use std::sync::Once;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::sample::{PointSample, ProcessTag};
use super::window::Window;
use crate::error::{Error, Result};
use crate::rng::{stream, stream_rng};

/// Largest truncation order accepted by [`sample_ginibre`].
pub const DEFAULT_MAX_ORDER: usize = 2048;

/// Radius of the unit-intensity bulk for truncation order `n`.
pub fn bulk_radius(n: usize) -> f64 {
    (n as f64 / std::f64::consts::PI).sqrt()
}

pub fn sample_ginibre(n: usize, seed: u64) -> Result<PointSample> {
    sample_ginibre_capped(n, seed, DEFAULT_MAX_ORDER)
}

/// Ginibre sample with an explicit order cap.
///
/// The window is the ball of radius `max(sqrt(N/pi), max |z|)`: edge
/// eigenvalues may fall slightly outside the nominal bulk.
pub fn sample_ginibre_capped(n: usize, seed: u64, cap: usize) -> Result<PointSample> {
    if n == 0 {
        return Err(Error::invalid("ginibre order must be >= 1"));
    }
    if n > cap {
        return Err(Error::invalid(format!("ginibre order {n} exceeds cap {cap}")));
    }
    let mut rng = stream_rng(seed, stream::GINIBRE);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let m: Vec<Complex64> = (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    let eig = eigenvalues(n, m)?;
    let norm = std::f64::consts::PI.sqrt();
    let mut pts: Vec<[f64; 2]> = eig.iter().map(|z| [z.re / norm, z.im / norm]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let bulk = bulk_radius(n);
    let max_mod = pts.iter().map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt()).fold(0.0, f64::max);
    let radius = bulk.max(max_mod * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    let coords = pts.iter().flatten().copied().collect();
    Ok(PointSample::from_parts(
        coords,
        Window::ball(2, radius)?,
        seed,
        ProcessTag::Ginibre { order: n, bulk_radius: bulk },
    ))
}

extern "C" {
    fn openblas_set_num_threads(n: std::ffi::c_int);
}

static SINGLE_THREADED: Once = Once::new();

/// Eigenvalues of the column-major `n x n` matrix `a` by LAPACK `zgeev`.
/// BLAS runs on one thread so results do not depend on its scheduling;
/// parallelism comes from replications instead.
fn eigenvalues(n: usize, mut a: Vec<Complex64>) -> Result<Vec<Complex64>> {
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    // SAFETY: plain setter exported by the linked OpenBLAS.
    SINGLE_THREADED.call_once(|| unsafe { openblas_set_num_threads(1) });
    let ni = i32::try_from(n).map_err(|_| Error::invalid("ginibre order too large"))?;
    let zero = Complex64::new(0.0, 0.0);
    let mut w = vec![zero; n];
    let (mut vl, mut vr) = ([zero], [zero]);
    let mut rwork = vec![0.0; 2 * n];
    let mut work = vec![zero];
    let mut info = 0;
    // SAFETY: every buffer has the length zgeev documents for jobvl = jobvr = 'N'.
    unsafe {
        lapack::zgeev(b'N', b'N', ni, &mut a, ni, &mut w, &mut vl, 1, &mut vr, 1, &mut work, -1, &mut rwork, &mut info);
    }
    if info == 0 {
        let lwork = work[0].re as usize;
        work = vec![zero; lwork.max(2 * n)];
        let lw = work.len() as i32;
        unsafe {
            lapack::zgeev(b'N', b'N', ni, &mut a, ni, &mut w, &mut vl, 1, &mut vr, 1, &mut work, lw, &mut rwork, &mut info);
        }
    }
    if info != 0 {
        return Err(Error::Numerical(format!("zgeev failed with info {info}")));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_a_scaled_gaussian() {
        let s = sample_ginibre(1, 11).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.window().contains(s.point(0)));
    }

    #[test]
    fn cap_enforced() {
        assert!(sample_ginibre_capped(9, 1, 8).is_err());
        assert!(sample_ginibre(0, 1).is_err());
    }

    #[test]
    fn eigenvalues_match_trace() {
        // sum of eigenvalues = trace, sum of squares = trace of the square
        let n = 7;
        let a: Vec<Complex64> = (0..n * n).map(|i| Complex64::new((i % 5) as f64 - 2.0, (i % 3) as f64)).collect();
        let at = |i: usize, j: usize| a[i + j * n];
        let trace: Complex64 = (0..n).map(|i| at(i, i)).sum();
        let trace2: Complex64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| at(i, j) * at(j, i)).sum();
        let w = eigenvalues(n, a.clone()).unwrap();
        assert!((w.iter().sum::<Complex64>() - trace).norm() < 1e-9);
        assert!((w.iter().map(|z| z * z).sum::<Complex64>() - trace2).norm() < 1e-8);
    }

    #[test]
    fn samples_are_reproducible() {
        let s = sample_ginibre(12, 3).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(s.coords(), sample_ginibre(12, 3).unwrap().coords());
        assert!(s.points().all(|p| s.window().contains(p)));
    }
}
