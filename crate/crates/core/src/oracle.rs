//! Independent checks for the closed forms: brute-force minimization of the
//! empirical Fréchet function over deterministic grids, finite-difference
//! projection differentials, and the general (frame-based) covariance
//! estimator `A S_n Aᵀ` with `A_{ab} = d P(e_b) · f_a`.
//!
//! None of this is meant for production use; it exists so that tests can
//! verify the fast paths by a different route.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{EpcaError, Result};
use crate::geometry::{sample_covariance, AmbientVector, EmbeddingBackend, SymmetricMatrix, TangentFrame};
use crate::shape::{helmert_inverse, PreShape};
use crate::sphere::UnitVector;
use crate::vw::C64;

/// Deterministic point sets used by [`frechet_grid_argmin`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// Fibonacci lattice with `n` points on `S²`.
    Fibonacci { n: usize },
    /// `n` equally spaced angles on `S¹`.
    Circle { n: usize },
    /// Angle grid on `CP¹` (Bloch-sphere parameters): `polar` values of the
    /// polar angle in `[0, π]` times `azimuth` values in `[0, 2π)`.
    ComplexProjectiveLine { polar: usize, azimuth: usize },
}

impl GridSpec {
    pub fn len(&self) -> usize {
        match *self {
            GridSpec::Fibonacci { n } | GridSpec::Circle { n } => n,
            GridSpec::ComplexProjectiveLine { polar, azimuth } => polar * azimuth,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points on a sphere (`Fibonacci` or `Circle` grids).
    pub fn sphere_points(&self) -> Result<Vec<UnitVector>> {
        match *self {
            GridSpec::Fibonacci { n } => Ok(fibonacci_sphere(n)),
            GridSpec::Circle { n } => Ok((0..n)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / n as f64;
                    UnitVector::new(DVector::from_vec(vec![t.cos(), t.sin()])).expect("unit by construction")
                })
                .collect()),
            GridSpec::ComplexProjectiveLine { .. } => Err(EpcaError::input("a CP^1 grid has no sphere points")),
        }
    }

    /// Grid points on `CP¹` as unit vectors of `C²`.
    pub fn cp1_points(&self) -> Result<Vec<DVector<C64>>> {
        let GridSpec::ComplexProjectiveLine { polar, azimuth } = *self else {
            return Err(EpcaError::input("only CP^1 grids have projective points"));
        };
        let mut out = Vec::with_capacity(polar * azimuth);
        for i in 0..polar {
            let theta = if polar == 1 {
                0.0
            } else {
                PI * i as f64 / (polar - 1) as f64
            };
            for j in 0..azimuth {
                let phi = 2.0 * PI * j as f64 / azimuth as f64;
                out.push(DVector::from_vec(vec![
                    C64::new((theta / 2.0).cos(), 0.0),
                    C64::from_polar((theta / 2.0).sin(), phi),
                ]));
            }
        }
        Ok(out)
    }

    /// Grid points as shapes of triangles (`k = 3`), through the Helmert
    /// identification of centered `C³` with `C²`.
    pub fn triangle_shapes(&self) -> Result<Vec<PreShape>> {
        self.cp1_points()?
            .into_iter()
            .map(|u| PreShape::from_raw(helmert_inverse(&u)))
            .collect()
    }
}

/// Fibonacci lattice on `S²` (golden-angle spiral, `n` points).
pub fn fibonacci_sphere(n: usize) -> Vec<UnitVector> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            let v = DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z]);
            UnitVector::new(v.normalize()).expect("unit by construction")
        })
        .collect()
}

/// Empirical Fréchet function `n⁻¹ Σ ‖j(p) − j(x_i)‖²`.
pub fn frechet_value<B: EmbeddingBackend>(backend: &B, point: &B::Point, sample: &[B::Point]) -> Result<f64> {
    if sample.is_empty() {
        return Err(EpcaError::input("empty sample"));
    }
    let p = backend.embed(point)?;
    let mut total = 0.0;
    for x in sample {
        total += (&p - backend.embed(x)?).norm_squared();
    }
    Ok(total / sample.len() as f64)
}

/// Grid point with the smallest Fréchet value (lowest index on ties),
/// returned as `(index, value)`.
pub fn frechet_grid_argmin<B>(backend: &B, sample: &[B::Point], grid: &[B::Point]) -> Result<(usize, f64)>
where
    B: EmbeddingBackend + Sync,
    B::Point: Sync,
{
    if grid.is_empty() {
        return Err(EpcaError::input("empty grid"));
    }
    if sample.is_empty() {
        return Err(EpcaError::input("empty sample"));
    }
    let embedded: Vec<AmbientVector> = sample.iter().map(|x| backend.embed(x)).collect::<Result<_>>()?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|g| {
            let p = backend.embed(g)?;
            let total: f64 = embedded.iter().map(|y| (&p - y).norm_squared()).sum();
            Ok(total / embedded.len() as f64)
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    Ok((best, values[best]))
}

/// Central-difference matrix of `d_μ P_j`: column `b` is
/// `(P_j(μ + h e_b) − P_j(μ − h e_b)) / 2h`.
pub fn finite_diff_dp<B: EmbeddingBackend>(backend: &B, mu: &AmbientVector, h: f64) -> Result<DMatrix<f64>> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(EpcaError::input(format!("step {h:e} outside [1e-7, 1e-3]")));
    }
    if backend.is_focal(mu) {
        return Err(EpcaError::focal("finite differences requested at a focal point"));
    }
    let n = mu.len();
    let mut out = DMatrix::zeros(n, n);
    for b in 0..n {
        let mut plus = mu.clone();
        let mut minus = mu.clone();
        plus[b] += h;
        minus[b] -= h;
        let diff = (backend.project(&plus)? - backend.project(&minus)?) / (2.0 * h);
        out.set_column(b, &diff);
    }
    Ok(out)
}

/// General sample extrinsic covariance from embedded sample points, a
/// differential of the projection at their mean, and a frame at the
/// projected mean: `A S_n Aᵀ` with `A = Fᵀ · dP`.
pub fn general_extrinsic_covariance(
    embedded: &[AmbientVector],
    differential: &DMatrix<f64>,
    frame: &TangentFrame,
) -> Result<SymmetricMatrix> {
    let (_, s_n) = sample_covariance(embedded)?;
    if differential.shape() != (s_n.dim(), s_n.dim()) || frame.ambient_dim() != s_n.dim() {
        return Err(EpcaError::input("differential, frame and sample dimensions disagree"));
    }
    let a = frame.vectors().transpose() * differential;
    SymmetricMatrix::new(&a * s_n.as_matrix() * a.transpose())
}

/// `‖a − b‖_F / ‖b‖_F` (absolute error when `b` vanishes).
pub fn relative_error(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = b.norm();
    let err = (a - b).norm();
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{sphere_extrinsic_mean, Sphere, SphereSample};
    use crate::vw::{ComplexProjective, RealProjective};

    fn unit(c: &[f64]) -> UnitVector {
        UnitVector::new(DVector::from_column_slice(c).normalize()).unwrap()
    }

    #[test]
    fn frechet_value_examples() {
        let sphere = Sphere::new(2).unwrap();
        let p = unit(&[0.0, 0.6, 0.8]);
        assert_eq!(frechet_value(&sphere, &p, std::slice::from_ref(&p)).unwrap(), 0.0);
        let anti = unit(&[0.0, -0.6, -0.8]);
        assert!((frechet_value(&sphere, &anti, &[p]).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn extrinsic_mean_beats_random_points() {
        let sphere = Sphere::new(2).unwrap();
        let sample: Vec<UnitVector> = (0..15)
            .map(|i| unit(&[1.0 + 0.3 * (i as f64).sin(), 0.5 * (i as f64 * 1.7).cos(), 0.4]))
            .collect();
        let mean = sphere_extrinsic_mean(&SphereSample::new(sample.clone()).unwrap()).unwrap();
        let at_mean = frechet_value(&sphere, &mean, &sample).unwrap();
        for p in fibonacci_sphere(1000) {
            assert!(frechet_value(&sphere, &p, &sample).unwrap() >= at_mean);
        }
    }

    #[test]
    fn grid_argmin_for_two_axes() {
        let sphere = Sphere::new(2).unwrap();
        let sample = vec![unit(&[1.0, 0.0, 0.0]), unit(&[0.0, 1.0, 0.0])];
        let grid = GridSpec::Fibonacci { n: 200_000 }.sphere_points().unwrap();
        let (idx, _) = frechet_grid_argmin(&sphere, &sample, &grid).unwrap();
        let target = unit(&[1.0, 1.0, 0.0]);
        assert!(sphere.chord_distance(&grid[idx], &target).unwrap() < 1e-2);

        let single = vec![unit(&[0.3, -0.4, 0.5])];
        let (idx, _) = frechet_grid_argmin(&sphere, &single, &grid).unwrap();
        assert!(sphere.chord_distance(&grid[idx], &single[0]).unwrap() < 1e-2);
        assert!(frechet_grid_argmin(&sphere, &single, &[]).is_err());
    }

    #[test]
    fn grids_satisfy_point_invariants() {
        for p in (GridSpec::Circle { n: 17 }).sphere_points().unwrap() {
            assert!((p.as_vector().norm() - 1.0).abs() < 1e-9);
        }
        let tri = GridSpec::ComplexProjectiveLine { polar: 7, azimuth: 9 }
            .triangle_shapes()
            .unwrap();
        assert_eq!(tri.len(), 63);
        assert!(GridSpec::Fibonacci { n: 3 }.cp1_points().is_err());
    }

    #[test]
    fn sphere_finite_differences() {
        let sphere = Sphere::new(2).unwrap();
        let e3 = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let mut expected = DMatrix::identity(3, 3);
        expected[(2, 2)] = 0.0;
        let fd = finite_diff_dp(&sphere, &e3, 1e-5).unwrap();
        assert!((&fd - &expected).amax() < 1e-6);
        let fd2 = finite_diff_dp(&sphere, &(e3 * 2.0), 1e-5).unwrap();
        assert!((fd2 - expected * 0.5).amax() < 1e-6);
        assert!(finite_diff_dp(&sphere, &DVector::zeros(3), 1e-5).is_err());
        assert!(finite_diff_dp(&sphere, &DVector::from_vec(vec![1.0, 0.0, 0.0]), 1e-2).is_err());
    }

    #[test]
    fn finite_differences_converge_quadratically() {
        let sphere = Sphere::new(2).unwrap();
        let mu = DVector::from_vec(vec![0.3, -0.5, 0.6]);
        let exact = sphere.projection_differential(&mu).unwrap();
        let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&h| (finite_diff_dp(&sphere, &mu, h).unwrap() - &exact).norm())
            .collect();
        let slope = (errs[0] / errs[1]).log10();
        assert!(slope >= 1.8, "log-slope {slope}, errors {errs:?}");
    }

    #[test]
    fn closed_form_differentials_match_finite_differences() {
        let rp = RealProjective::new(3).unwrap();
        let x = [
            DVector::from_vec(vec![1.0, 0.2, 0.1]),
            DVector::from_vec(vec![0.9, -0.1, 0.3]),
            DVector::from_vec(vec![1.0, 0.1, -0.2]),
        ];
        let mean: AmbientVector = x.iter().map(|p| rp.embed(p).unwrap()).sum::<AmbientVector>() / 3.0;
        let exact = rp.projection_differential(&mean).unwrap();
        let fd = finite_diff_dp(&rp, &mean, 1e-5).unwrap();
        assert!((exact - fd).amax() < 1e-6);

        let cp = ComplexProjective::new(3).unwrap();
        let z: Vec<DVector<C64>> = (0..4)
            .map(|i| {
                let t = i as f64;
                DVector::from_vec(vec![
                    C64::new(1.0, 0.1 * t),
                    C64::new(0.2 * t.sin(), 0.3),
                    C64::new(-0.1, 0.2 * t.cos()),
                ])
            })
            .collect();
        let mean: AmbientVector = z.iter().map(|p| cp.embed(p).unwrap()).sum::<AmbientVector>() / 4.0;
        let exact = cp.projection_differential(&mean).unwrap();
        let fd = finite_diff_dp(&cp, &mean, 1e-5).unwrap();
        assert!((exact - fd).amax() < 1e-6);
    }
}
