//! Closed forms against independent oracles.
//!
//! The extrinsic mean is compared with a brute-force minimizer of the
//! empirical Fréchet function on a Fibonacci grid, and the closed-form
//! covariances with the general estimator built from finite-difference
//! projection differentials. Finally the full `verify` suites are run.

use extrinsic_pca::geometry::EmbeddingBackend;
use extrinsic_pca::oracle::{finite_diff_dp, frechet_grid_argmin, frechet_value, GridSpec};
use extrinsic_pca::sphere::{sphere_extrinsic_mean, Sphere, SphereSample, UnitVector};
use extrinsic_pca::verify::{run_verify, VerifyBackend};

fn fmt(v: &nalgebra::DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:+.4}")).collect();
    format!("({})", parts.join(", "))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sphere = Sphere::new(2)?;
    let points = [[1.0, 0.1, 0.2], [0.8, 0.5, -0.1], [0.9, -0.2, 0.4], [0.7, 0.3, 0.3]]
        .iter()
        .map(|p| UnitVector::new(nalgebra::DVector::from_column_slice(p).normalize()))
        .collect::<Result<Vec<_>, _>>()?;
    let sample = SphereSample::new(points.clone())?;
    let mean = sphere_extrinsic_mean(&sample)?;

    let grid = GridSpec::Fibonacci { n: 200_000 }.sphere_points()?;
    let (idx, value) = frechet_grid_argmin(&sphere, &points, &grid)?;
    println!("closed-form mean {}", fmt(mean.as_vector()));
    println!("grid minimizer   {}", fmt(grid[idx].as_vector()));
    println!(
        "Fréchet value: {:.6} at the mean, {:.6} at the grid point, chord distance {:.2e}",
        frechet_value(&sphere, &mean, &points)?,
        value,
        sphere.chord_distance(&mean, &grid[idx])?
    );

    let mu = sample.ambient_mean();
    let exact = sphere.projection_differential(&mu)?;
    for h in [1e-3, 1e-4, 1e-5] {
        let err = (finite_diff_dp(&sphere, &mu, h)? - &exact).norm();
        println!("finite-difference differential, h = {h:.0e}: error {err:.3e}");
    }

    for backend in [VerifyBackend::Sphere, VerifyBackend::Shape] {
        println!("\n{backend:?} suite:");
        print!("{}", run_verify(backend, 1, false)?.table());
    }
    Ok(())
}
