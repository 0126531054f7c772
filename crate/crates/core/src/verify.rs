//! Oracle equivalence suites behind `epca verify`, plus the randomized
//! instance generators they use.
//!
//! Every check compares a closed form against an oracle from
//! [`crate::oracle`] and records the worst residual over its instances.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::geometry::{AmbientVector, EmbeddingBackend};
use crate::oracle::{finite_diff_dp, frechet_grid_argmin, general_extrinsic_covariance, relative_error, GridSpec};
use crate::shape::{self, KendallShapes, PreShape};
use crate::sphere::{self, Sphere, SphereSample, UnitVector};
use crate::vw::{self, hermitian_to_vec, ComplexProjective, RealProjective, C64};

/// Step used for every finite-difference differential.
pub const FD_STEP: f64 = 1e-5;
/// Chord distance allowed between a closed-form mean and a grid minimizer.
pub const GRID_TOL: f64 = 2e-2;
/// Relative error allowed between closed-form and oracle covariances.
pub const COVARIANCE_RTOL: f64 = 1e-6;
/// Absolute error allowed in the gap-scaling identity.
pub const GAP_SCALING_TOL: f64 = 1e-5;
/// Smallest top eigenvalue gap accepted for random projective instances.
pub const MIN_INSTANCE_GAP: f64 = 0.1;

/// Which suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyBackend {
    Sphere,
    Shape,
}

/// Outcome of one property over all its instances.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub instances: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn new(name: &str, residuals: &[f64], tolerance: f64) -> Self {
        Self {
            name: name.into(),
            instances: residuals.len(),
            worst_residual: residuals.iter().copied().fold(0.0, f64::max),
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.worst_residual <= self.tolerance
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(8).max(8);
        let mut s = format!(
            "{:<width$}  {:>9}  {:>12}  {:>9}  result\n",
            "property", "instances", "worst", "tolerance"
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<width$}  {:>9}  {:>12.3e}  {:>9.1e}  {}",
                c.name,
                c.instances,
                c.worst_residual,
                c.tolerance,
                if c.passed() { "pass" } else { "FAIL" }
            );
        }
        s
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| normal(rng));
        let norm = v.norm();
        if norm > 1e-3 {
            return v / norm;
        }
    }
}

/// `n` points on `S²` scattered around a random center with a random
/// spread between 0.05 and 0.8.
pub fn random_sphere_sample(rng: &mut ChaCha8Rng, n: usize) -> SphereSample {
    let center = random_unit(rng, 3);
    let sigma = rng.random_range(0.05..0.8);
    let points = (0..n)
        .map(|_| {
            let v = &center + DVector::from_fn(3, |_, _| sigma * normal(rng));
            sphere::sphere_project(&v).unwrap_or_else(|_| UnitVector::new(center.clone()).expect("unit"))
        })
        .collect();
    SphereSample::new(points).expect("non-empty, same dimension")
}

/// Concentrated real projective sample (`n` points of `R^dim`) whose
/// averaged VW matrix has top gap at least [`MIN_INSTANCE_GAP`].
pub fn random_real_projective_sample(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<DVector<f64>> {
    loop {
        let center = random_unit(rng, dim);
        let sigma = rng.random_range(0.1..0.5);
        let sample: Vec<DVector<f64>> = (0..n)
            .map(|_| &center + DVector::from_fn(dim, |_, _| sigma * normal(rng)))
            .collect();
        if vw::rp_fit(&sample).is_ok_and(|f| f.gaps[0] >= MIN_INSTANCE_GAP) {
            return sample;
        }
    }
}

/// Concentrated complex projective sample (`n` points of `C^dim`) with top
/// gap at least [`MIN_INSTANCE_GAP`].
pub fn random_complex_projective_sample(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<DVector<C64>> {
    loop {
        let center = random_unit(rng, 2 * dim);
        let center = DVector::from_fn(dim, |i, _| C64::new(center[2 * i], center[2 * i + 1]));
        let sigma = rng.random_range(0.1..0.5);
        let sample: Vec<DVector<C64>> = (0..n)
            .map(|_| {
                let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
                (&center + DVector::from_fn(dim, |_, _| C64::new(sigma * normal(rng), sigma * normal(rng)))) * phase
            })
            .collect();
        if vw::vw_fit(&sample).is_ok_and(|f| f.spectral_gap() >= MIN_INSTANCE_GAP) {
            return sample;
        }
    }
}

/// Random `k`-point configuration.
pub fn random_configuration(rng: &mut ChaCha8Rng, k: usize) -> DVector<C64> {
    DVector::from_fn(k, |_, _| C64::new(normal(rng), normal(rng)))
}

/// `n` noisy copies of `template` (landmark noise `sigma`, random similarity
/// transforms), as preshapes.
pub fn perturbed_shapes(rng: &mut ChaCha8Rng, template: &DVector<C64>, n: usize, sigma: f64) -> Vec<PreShape> {
    let scale = template.norm() / (template.len() as f64).sqrt();
    (0..n)
        .map(|_| {
            let noise = DVector::from_fn(template.len(), |_, _| {
                C64::new(normal(rng), normal(rng)) * (sigma * scale)
            });
            let rotation = C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU));
            let shift = C64::new(normal(rng), normal(rng));
            let z = (template + noise) * rotation;
            PreShape::from_raw(z.map(|v| v + shift)).expect("non-degenerate with probability one")
        })
        .collect()
}

/// Concentrated shape sample whose VW fit has top gap at least
/// [`MIN_INSTANCE_GAP`].
pub fn random_shape_sample(rng: &mut ChaCha8Rng, k: usize, n: usize) -> Vec<PreShape> {
    loop {
        let template = random_configuration(rng, k);
        let sigma = rng.random_range(0.05..0.3);
        let sample = perturbed_shapes(rng, &template, n, sigma);
        if shape::shape_fit(&sample).is_ok_and(|f| f.vw.spectral_gap() >= MIN_INSTANCE_GAP) {
            return sample;
        }
    }
}

/// Chord distance between the closed-form sphere mean and the Fréchet
/// minimizer over `grid`.
pub fn sphere_mean_residual(sample: &SphereSample, grid: &[UnitVector]) -> Result<f64> {
    let backend = Sphere::new(sample.dim())?;
    let mean = sphere::sphere_extrinsic_mean(sample)?;
    let (idx, _) = frechet_grid_argmin(&backend, sample.points(), grid)?;
    backend.chord_distance(&mean, &grid[idx])
}

/// Chord distance between the VW mean of triangles and the Fréchet
/// minimizer over `grid`.
pub fn triangle_mean_residual(sample: &[PreShape], grid: &[PreShape]) -> Result<f64> {
    let backend = KendallShapes::new(3)?;
    let mean = shape::vw_mean(sample)?;
    let (idx, _) = frechet_grid_argmin(&backend, sample, grid)?;
    shape::shape_chord_distance(&mean, &grid[idx])
}

fn embedded<B: EmbeddingBackend>(backend: &B, sample: &[B::Point]) -> Result<(Vec<AmbientVector>, AmbientVector)> {
    let points: Vec<AmbientVector> = sample.iter().map(|p| backend.embed(p)).collect::<Result<_>>()?;
    let mean = points.iter().sum::<AmbientVector>() / points.len() as f64;
    Ok((points, mean))
}

/// Sphere: closed-form covariance against the general estimator with a
/// finite-difference differential, in the same frame.
pub fn sphere_covariance_residual(sample: &SphereSample) -> Result<f64> {
    let backend = Sphere::new(sample.dim())?;
    let mean = sphere::sphere_extrinsic_mean(sample)?;
    let frame = backend.tangent_frame(mean.as_vector())?;
    let closed = sphere::sphere_extrinsic_covariance(sample, &mean, &frame)?;
    let (points, ambient_mean) = embedded(&backend, sample.points())?;
    let fd = finite_diff_dp(&backend, &ambient_mean, FD_STEP)?;
    let oracle = general_extrinsic_covariance(&points, &fd, &frame)?;
    Ok(relative_error(closed.as_matrix(), oracle.as_matrix()))
}

/// Sphere: closed-form differential of the projection against finite
/// differences (relative Frobenius error).
pub fn sphere_differential_residual(sample: &SphereSample) -> Result<f64> {
    let backend = Sphere::new(sample.dim())?;
    let mu = sample.ambient_mean();
    let exact = backend.projection_differential(&mu)?;
    Ok(relative_error(&finite_diff_dp(&backend, &mu, FD_STEP)?, &exact))
}

/// `RP^{N−1}`: closed form against the finite-difference general estimator.
pub fn real_covariance_residual(sample: &[DVector<f64>]) -> Result<f64> {
    let backend = RealProjective::new(sample[0].len())?;
    let fit = vw::rp_fit(sample)?;
    let closed = vw::rp_extrinsic_covariance(&fit, sample)?;
    let (points, mean) = embedded(&backend, sample)?;
    let fd = finite_diff_dp(&backend, &mean, FD_STEP)?;
    let oracle = general_extrinsic_covariance(&points, &fd, &fit.tangent_frame()?)?;
    Ok(relative_error(closed.as_matrix(), oracle.as_matrix()))
}

/// `CP^{N−1}`: realified closed form against the finite-difference general
/// estimator. `mutate` swaps in the deliberately broken closed form.
pub fn complex_covariance_residual(sample: &[DVector<C64>], mutate: bool) -> Result<f64> {
    let backend = ComplexProjective::new(sample[0].len())?;
    let fit = vw::vw_fit(sample)?;
    let closed = if mutate {
        vw::vw_extrinsic_covariance_mutated(&fit, sample)?
    } else {
        vw::vw_extrinsic_covariance(&fit, sample)?
    };
    let (points, mean) = embedded(&backend, sample)?;
    let fd = finite_diff_dp(&backend, &mean, FD_STEP)?;
    let oracle = general_extrinsic_covariance(&points, &fd, &fit.tangent_frame()?)?;
    Ok(relative_error(closed.as_matrix(), oracle.as_matrix()))
}

/// Planar shapes: closed form against the finite-difference general
/// estimator in Helmert coordinates.
pub fn shape_covariance_residual(sample: &[PreShape], mutate: bool) -> Result<f64> {
    let backend = KendallShapes::new(sample[0].k())?;
    let fit = shape::shape_fit(sample)?;
    let closed = if mutate {
        shape::shape_covariance_mutated(&fit, sample)?
    } else {
        shape::shape_covariance(&fit, sample)?
    };
    let (points, mean) = embedded(&backend, sample)?;
    let fd = finite_diff_dp(&backend, &mean, FD_STEP)?;
    let oracle = general_extrinsic_covariance(&points, &fd, &fit.frame.to_tangent_frame()?)?;
    Ok(relative_error(closed.as_matrix(), oracle.as_matrix()))
}

/// Increasing eigenvalues with consecutive gaps of at least 0.05, summing
/// to one.
pub fn random_diagonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut eta: Vec<f64> = Vec::with_capacity(n);
    let mut acc = rng.random_range(0.0..0.1);
    for _ in 0..n {
        eta.push(acc);
        acc += rng.random_range(0.05..0.5);
    }
    let total: f64 = eta.iter().sum::<f64>() + 1e-3;
    eta.iter().map(|e| (e + 1e-3 / n as f64) / total).collect()
}

/// Index in the flattened Hermitian coordinates of `√2·Re H_ab` (`a < b`).
fn off_diagonal_index(n: usize, a: usize, b: usize) -> usize {
    let mut idx = n;
    for r in 0..a {
        idx += 2 * (n - r - 1);
    }
    idx + 2 * (b - a - 1)
}

/// Finite-difference `d_D P` at `D = diag(η)` (increasing `η`) applied to the
/// unit basis matrices: the `(a, N)` off-diagonal directions must be scaled
/// by `(η_N − η_a)⁻¹`, and the `(a, b)` directions with `a, b < N` must be
/// annihilated. Returns the largest absolute deviation divided by
/// `max(1, expected)`.
pub fn gap_scaling_residual(eta: &[f64]) -> Result<f64> {
    let n = eta.len();
    let backend = ComplexProjective::new(n)?;
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(eta[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let fd = finite_diff_dp(&backend, &hermitian_to_vec(&d), FD_STEP)?;
    let top = n - 1;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a..n {
            let idxs = if a == b {
                vec![a]
            } else {
                let i = off_diagonal_index(n, a, b);
                vec![i, i + 1]
            };
            let scale = if b == top && a < top {
                1.0 / (eta[top] - eta[a])
            } else {
                0.0
            };
            for idx in idxs {
                let mut expected = DVector::zeros(n * n);
                expected[idx] = scale;
                let got = fd.column(idx);
                worst = worst.max((got - &expected).amax() / scale.max(1.0));
            }
        }
    }
    Ok(worst)
}

fn residuals(count: usize, mut f: impl FnMut() -> Result<f64>) -> Result<Vec<f64>> {
    (0..count).map(|_| f()).collect()
}

/// Runs the oracle suite for `backend`. With `mutate`, the shape suite uses
/// the deliberately broken closed-form covariance and must fail.
pub fn run_verify(backend: VerifyBackend, seed: u64, mutate: bool) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::default();
    match backend {
        VerifyBackend::Sphere => {
            let grid = GridSpec::Fibonacci { n: 200_000 }.sphere_points()?;
            let r = residuals(10, || {
                let n = rng.random_range(2..=50);
                sphere_mean_residual(&random_sphere_sample(&mut rng, n), &grid)
            })?;
            report
                .checks
                .push(CheckOutcome::new("sphere mean vs Fibonacci grid argmin", &r, GRID_TOL));
            let r = residuals(20, || {
                let n = rng.random_range(2..=50);
                sphere_covariance_residual(&random_sphere_sample(&mut rng, n))
            })?;
            report.checks.push(CheckOutcome::new(
                "sphere covariance vs finite differences",
                &r,
                COVARIANCE_RTOL,
            ));
            let r = residuals(20, || {
                let n = rng.random_range(2..=50);
                sphere_differential_residual(&random_sphere_sample(&mut rng, n))
            })?;
            report.checks.push(CheckOutcome::new(
                "sphere differential vs finite differences",
                &r,
                COVARIANCE_RTOL,
            ));
        }
        VerifyBackend::Shape => {
            let grid = GridSpec::ComplexProjectiveLine {
                polar: 301,
                azimuth: 600,
            }
            .triangle_shapes()?;
            let r = residuals(5, || {
                let template = random_configuration(&mut rng, 3);
                let n = rng.random_range(3..=20);
                triangle_mean_residual(&perturbed_shapes(&mut rng, &template, n, 0.2), &grid)
            })?;
            report
                .checks
                .push(CheckOutcome::new("triangle VW mean vs CP^1 grid argmin", &r, GRID_TOL));
            let r = residuals(20, || {
                let k = rng.random_range(3..=7);
                let n = rng.random_range(2..=10);
                shape_covariance_residual(&random_shape_sample(&mut rng, k, n), mutate)
            })?;
            report.checks.push(CheckOutcome::new(
                "shape covariance vs finite differences",
                &r,
                COVARIANCE_RTOL,
            ));
            let r = residuals(20, || {
                let dim = rng.random_range(2..=6);
                let n = rng.random_range(2..=10);
                complex_covariance_residual(&random_complex_projective_sample(&mut rng, n, dim), mutate)
            })?;
            report.checks.push(CheckOutcome::new(
                "CP^(N-1) covariance vs finite differences",
                &r,
                COVARIANCE_RTOL,
            ));
            let r = residuals(20, || {
                let dim = rng.random_range(2..=6);
                let n = rng.random_range(2..=10);
                real_covariance_residual(&random_real_projective_sample(&mut rng, n, dim))
            })?;
            report.checks.push(CheckOutcome::new(
                "RP^(N-1) covariance vs finite differences",
                &r,
                COVARIANCE_RTOL,
            ));
            let r = residuals(20, || {
                let dim = rng.random_range(2..=6);
                gap_scaling_residual(&random_diagonal(&mut rng, dim))
            })?;
            report.checks.push(CheckOutcome::new(
                "gap scaling of the differential at diag(eta)",
                &r,
                GAP_SCALING_TOL,
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_diagonal_indices_follow_the_flattening() {
        let n = 4;
        for a in 0..n {
            for b in a + 1..n {
                let mut h = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
                h[(a, b)] = C64::new(1.0, 0.0);
                h[(b, a)] = C64::new(1.0, 0.0);
                let v = hermitian_to_vec(&h);
                assert!((v[off_diagonal_index(n, a, b)] - std::f64::consts::SQRT_2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gap_scaling_holds_on_a_fixed_diagonal() {
        assert!(gap_scaling_residual(&[0.1, 0.25, 0.65]).unwrap() < GAP_SCALING_TOL);
    }

    #[test]
    fn mutation_is_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sample = random_complex_projective_sample(&mut rng, 8, 3);
        assert!(complex_covariance_residual(&sample, false).unwrap() < COVARIANCE_RTOL);
        assert!(complex_covariance_residual(&sample, true).unwrap() > 1e-3);
    }
}
