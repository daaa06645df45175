use rand::Rng as _;
use rand_distr::{Distribution, Poisson};

use super::density::{DensityEvaluator, DensitySpec};
use super::sample::{DensityTag, PointSample, ProcessTag};
use super::window::{Window, WindowSequence};
use crate::error::{Error, Result};
use crate::rng::{stream, stream_rng, Rng};

fn poisson_count(mean: f64, rng: &mut Rng) -> Result<usize> {
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::invalid(format!("poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as usize)
}

fn density_tag(f: &DensitySpec) -> DensityTag {
    match f.evaluator() {
        DensityEvaluator::Uniform => DensityTag::Uniform,
        DensityEvaluator::Grid(_) => DensityTag::Tabulated { lower: f.lower_bound(), upper: f.upper_bound() },
    }
}

/// Draw one point with density `f` by rejection from the uniform law on the support.
fn draw_from_density(f: &DensitySpec, rng: &mut Rng, out: &mut Vec<f64>) {
    let start = out.len();
    loop {
        f.support().sample_uniform(rng, out);
        if f.is_uniform() {
            return;
        }
        let u: f64 = rng.gen();
        if u * f.upper_bound() < f.eval(&out[start..]) {
            return;
        }
        out.truncate(start);
    }
}

/// Replace any repeated point by a fresh draw from the same stream.
fn make_simple(coords: &mut [f64], dim: usize, mut redraw: impl FnMut(&mut Vec<f64>)) {
    loop {
        let probe = PointSample::from_parts(coords.to_vec(), Window::unit_box(dim), 0, ProcessTag::Manual);
        let Some((_, j)) = probe.first_duplicate() else { return };
        let mut fresh = Vec::with_capacity(dim);
        redraw(&mut fresh);
        coords[j * dim..(j + 1) * dim].copy_from_slice(&fresh);
    }
}

fn uniform_points(w: &Window, count: usize, rng: &mut Rng) -> Vec<f64> {
    let mut coords = Vec::with_capacity(count * w.dim());
    for _ in 0..count {
        w.sample_uniform(rng, &mut coords);
    }
    make_simple(&mut coords, w.dim(), |out| w.sample_uniform(rng, out));
    coords
}

/// Homogeneous Poisson process of intensity `lambda` on `w`.
pub fn sample_homogeneous_poisson(lambda: f64, w: &Window, seed: u64) -> Result<PointSample> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid(format!("intensity must be positive, got {lambda}")));
    }
    w.validate()?;
    let count = poisson_count(lambda * w.volume(), &mut stream_rng(seed, stream::COUNT))?;
    let coords = uniform_points(w, count, &mut stream_rng(seed, stream::POSITIONS));
    Ok(PointSample::from_parts(coords, w.clone(), seed, ProcessTag::Poisson { intensity: lambda }))
}

/// `n` iid points with density `f`.
pub fn sample_binomial(n: usize, f: &DensitySpec, seed: u64) -> Result<PointSample> {
    let mut rng = stream_rng(seed, stream::POSITIONS);
    let coords = iid_stream(f, n, &mut rng);
    Ok(PointSample::from_parts(
        coords,
        f.support().clone(),
        seed,
        ProcessTag::Binomial { n: n as u64, density: density_tag(f) },
    ))
}

fn iid_stream(f: &DensitySpec, n: usize, rng: &mut Rng) -> Vec<f64> {
    let d = f.support().dim();
    let mut coords = Vec::with_capacity(n * d);
    for _ in 0..n {
        draw_from_density(f, rng, &mut coords);
    }
    make_simple(&mut coords, d, |out| draw_from_density(f, rng, out));
    coords
}

/// Poisson process with intensity `n f`, by thinning a homogeneous process of
/// intensity `n f^*` on the support.
///
/// For a uniform density no thinning draws are made, so the output is
/// bit-identical to [`sample_homogeneous_poisson`] with intensity `n f^*`.
pub fn sample_inhomogeneous_poisson(n: f64, f: &DensitySpec, seed: u64) -> Result<PointSample> {
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::invalid(format!("scale must be positive, got {n}")));
    }
    let base = sample_homogeneous_poisson(n * f.upper_bound(), f.support(), seed)?;
    let coords = if f.is_uniform() {
        base.coords().to_vec()
    } else {
        let mut rng = stream_rng(seed, stream::THINNING);
        base.points()
            .filter(|p| rng.gen::<f64>() * f.upper_bound() < f.eval(p))
            .flatten()
            .copied()
            .collect()
    };
    Ok(PointSample::from_parts(
        coords,
        f.support().clone(),
        seed,
        ProcessTag::InhomPoisson { n, density: density_tag(f) },
    ))
}

/// `n` iid uniform points on `B_n` of the window sequence.
pub fn sample_extended_binomial(n: u64, seq: &WindowSequence, seed: u64) -> Result<PointSample> {
    if n == 0 {
        return Err(Error::invalid("extended binomial needs n >= 1"));
    }
    let w = seq.window(n)?;
    let coords = uniform_points(&w, n as usize, &mut stream_rng(seed, stream::POSITIONS));
    Ok(PointSample::from_parts(coords, w, seed, ProcessTag::ExtendedBinomial { n, sequence: *seq }))
}

/// Unit-intensity Poisson process on `B_n`.
pub fn sample_poisson_on_sequence(n: u64, seq: &WindowSequence, seed: u64) -> Result<PointSample> {
    sample_homogeneous_poisson(1.0, &seq.window(n)?, seed)
}

/// Coupled pair `(P_n, X_n)`: a Poisson(n) count and one iid stream, returning
/// the first `N_n` and the first `n` points of the stream.
pub fn sample_coupled_poisson_binomial(n: usize, f: &DensitySpec, seed: u64) -> Result<(PointSample, PointSample)> {
    if n == 0 {
        return Err(Error::invalid("coupling needs n >= 1"));
    }
    let count = poisson_count(n as f64, &mut stream_rng(seed, stream::COUNT))?;
    let total = count.max(n);
    let coords = iid_stream(f, total, &mut stream_rng(seed, stream::POSITIONS));
    let d = f.support().dim();
    let tag = density_tag(f);
    let poisson = PointSample::from_parts(
        coords[..count * d].to_vec(),
        f.support().clone(),
        seed,
        ProcessTag::InhomPoisson { n: n as f64, density: tag.clone() },
    );
    let binomial = PointSample::from_parts(
        coords[..n * d].to_vec(),
        f.support().clone(),
        seed,
        ProcessTag::Binomial { n: n as u64, density: tag },
    );
    Ok((poisson, binomial))
}
