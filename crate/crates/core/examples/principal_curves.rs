//! Principal curves and projections onto them.
//!
//! On the sphere the first principal curve is a great circle; each sample is
//! projected by keeping its score along the first component and mapping back
//! to the sphere. The same is done for contour shapes, where the curve is
//! `cos t · m + sin t · w` in preshape space.

use extrinsic_pca::engine::{principal_curve_points, project_sample_to_pc, run_epca, t_grid, EpcaBackend};
use extrinsic_pca::io::{butterfly_template, gen_contour_sample, gen_sphere_sample, SyntheticSphereConfig};
use extrinsic_pca::shape::KendallShapes;
use extrinsic_pca::sphere::Sphere;

/// Largest distance from a projected sample to the nearest curve point.
fn worst_gap<B: EpcaBackend>(backend: &B, projected: &[B::Point], curve: &[B::Point]) -> f64 {
    projected
        .iter()
        .map(|p| {
            curve
                .iter()
                .map(|c| backend.distance(p, c).unwrap())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = t_grid(20_001);

    let sphere = Sphere::new(2)?;
    let sample = gen_sphere_sample(&SyntheticSphereConfig::default_with_seed(3))?;
    let result = run_epca(sample.points(), &sphere)?;
    let curve = principal_curve_points(&sphere, &result, 0, &grid)?;
    let projected = project_sample_to_pc(&sphere, &result, 0)?;
    let normal = result.extrinsic_mean.as_vector().cross(&result.ambient_eigenvectors[0]);
    let off_plane = curve
        .iter()
        .map(|p| p.as_vector().dot(&normal).abs())
        .fold(0.0, f64::max);
    println!("sphere: first curve stays in the plane of mean and first direction (residual {off_plane:.1e})");
    println!(
        "sphere: projected samples lie within {:.1e} of the curve",
        worst_gap(&sphere, &projected, &curve)
    );

    let template = butterfly_template(60)?;
    let data = gen_contour_sample(&template, 30, 0.1, 11)?;
    let shapes = KendallShapes::new(60)?;
    let result = run_epca(&data.preshapes()?, &shapes)?;
    for c in 0..2 {
        let curve = principal_curve_points(&shapes, &result, c, &grid)?;
        let along = &result.scores * result.tangent_eigenvectors.column(c);
        println!(
            "shapes: component {} explains {:.1}%, scores range over [{:.3}, {:.3}]",
            c + 1,
            100.0 * result.explained_ratio[c],
            along.min(),
            along.max()
        );
        let projected = project_sample_to_pc(&shapes, &result, c)?;
        println!(
            "shapes: projected contours lie within {:.1e} of curve {}",
            worst_gap(&shapes, &projected, &curve),
            c + 1
        );
    }
    Ok(())
}
