//! Closed forms against brute-force and finite-difference oracles.

use extrinsic_pca::geometry::EmbeddingBackend;
use extrinsic_pca::oracle::{fibonacci_sphere, finite_diff_dp, frechet_value, relative_error, GridSpec};
use extrinsic_pca::shape::KendallShapes;
use extrinsic_pca::sphere::{sphere_extrinsic_mean, Sphere};
use extrinsic_pca::verify::{
    complex_covariance_residual, random_complex_projective_sample, random_real_projective_sample, random_shape_sample,
    random_sphere_sample, real_covariance_residual, shape_covariance_residual, sphere_covariance_residual,
    triangle_mean_residual,
};
use extrinsic_pca::vw::{ComplexProjective, RealProjective};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn differential_error<B: EmbeddingBackend>(backend: &B, mu: &DVector<f64>) -> f64 {
    let exact = backend.projection_differential(mu).unwrap();
    relative_error(&finite_diff_dp(backend, mu, 1e-5).unwrap(), &exact)
}

fn ambient_mean<B: EmbeddingBackend>(backend: &B, sample: &[B::Point]) -> DVector<f64> {
    sample.iter().map(|p| backend.embed(p).unwrap()).sum::<DVector<f64>>() / sample.len() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sphere_covariance_matches_oracle(seed in any::<u64>(), n in 2usize..50) {
        let sample = random_sphere_sample(&mut rng(seed), n);
        prop_assert!(sphere_covariance_residual(&sample).unwrap() <= 1e-6);
    }

    #[test]
    fn real_projective_covariance_matches_oracle(seed in any::<u64>(), n in 2usize..11, dim in 2usize..7) {
        let sample = random_real_projective_sample(&mut rng(seed), n, dim);
        prop_assert!(real_covariance_residual(&sample).unwrap() <= 1e-6);
    }

    #[test]
    fn complex_projective_covariance_matches_oracle(seed in any::<u64>(), n in 2usize..11, dim in 2usize..7) {
        let sample = random_complex_projective_sample(&mut rng(seed), n, dim);
        prop_assert!(complex_covariance_residual(&sample, false).unwrap() <= 1e-6);
    }

    #[test]
    fn shape_covariance_matches_oracle(seed in any::<u64>(), n in 2usize..11, k in 3usize..8) {
        let sample = random_shape_sample(&mut rng(seed), k, n);
        prop_assert!(shape_covariance_residual(&sample, false).unwrap() <= 1e-6);
    }

    #[test]
    fn differentials_match_finite_differences(seed in any::<u64>(), n in 2usize..10, dim in 2usize..6) {
        let mut r = rng(seed);
        let sphere_sample = random_sphere_sample(&mut r, n);
        let sphere = Sphere::new(2).unwrap();
        prop_assert!(differential_error(&sphere, &sphere_sample.ambient_mean()) <= 1e-6);

        let rp = random_real_projective_sample(&mut r, n, dim);
        let backend = RealProjective::new(dim).unwrap();
        prop_assert!(differential_error(&backend, &ambient_mean(&backend, &rp)) <= 1e-6);

        let cp = random_complex_projective_sample(&mut r, n, dim);
        let backend = ComplexProjective::new(dim).unwrap();
        prop_assert!(differential_error(&backend, &ambient_mean(&backend, &cp)) <= 1e-6);
    }
}

#[test]
fn sphere_mean_minimizes_the_frechet_function() {
    let grid = fibonacci_sphere(100_000);
    let sphere = Sphere::new(2).unwrap();
    for seed in 0..5 {
        let sample = random_sphere_sample(&mut rng(seed), 30);
        let mean = sphere_extrinsic_mean(&sample).unwrap();
        let best = frechet_value(&sphere, &mean, sample.points()).unwrap();
        for g in &grid {
            assert!(best <= frechet_value(&sphere, g, sample.points()).unwrap() + 1e-12);
        }
    }
}

#[test]
fn triangle_mean_agrees_with_a_fine_grid() {
    let grid = GridSpec::ComplexProjectiveLine {
        polar: 1001,
        azimuth: 1000,
    }
    .triangle_shapes()
    .unwrap();
    for seed in 0..3 {
        let sample = random_shape_sample(&mut rng(seed + 40), 3, 12);
        let residual = triangle_mean_residual(&sample, &grid).unwrap();
        assert!(residual <= 1e-2, "seed {seed}: {residual}");
    }
}

#[test]
fn shape_differential_matches_finite_differences() {
    for seed in 0..10 {
        let sample = random_shape_sample(&mut rng(seed), 5, 8);
        let backend = KendallShapes::new(5).unwrap();
        let mean = ambient_mean(&backend, &sample);
        assert!(differential_error(&backend, &mean) <= 1e-6);
    }
}
