//! Extrinsic PCA of a concentrated sample on the unit sphere.
//!
//! Simulates 300 points around a fixed direction with tangent standard
//! deviations 0.18 and 0.065, then prints the extrinsic mean, the scree and
//! a few points of the first principal great circle.
//!
//! ```text
//! cargo run --example sphere_demo -- [seed] [out-dir]
//! ```

use std::path::PathBuf;

use extrinsic_pca::engine::{principal_curve_points, run_epca};
use extrinsic_pca::io::{gen_sphere_sample, write_results, ResultOptions, SyntheticSphereConfig};
use extrinsic_pca::sphere::Sphere;

fn fmt(v: &nalgebra::DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:+.4}")).collect();
    format!("({})", parts.join(", "))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let out = args.next().map(PathBuf::from);

    let cfg = SyntheticSphereConfig::default_with_seed(seed);
    let sample = gen_sphere_sample(&cfg)?;
    let sphere = Sphere::new(2)?;
    let result = run_epca(sample.points(), &sphere)?;

    println!("n = {}, seed = {seed}", sample.len());
    println!("extrinsic mean: {}", fmt(result.extrinsic_mean.as_vector()));
    let c = result.covariance.as_matrix();
    println!(
        "covariance in the adapted frame: [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
        c[(0, 0)],
        c[(0, 1)],
        c[(1, 0)],
        c[(1, 1)]
    );
    let cumulative = result.cumulative_ratio();
    for i in 0..result.dim() {
        println!(
            "  component {}: eigenvalue {:.5}  explained {:5.1}%  cumulative {:5.1}%",
            i + 1,
            result.eigenvalues[i],
            100.0 * result.explained_ratio[i],
            100.0 * cumulative[i]
        );
    }

    // the first principal component is a great circle through the mean
    let ts = [-0.6, -0.3, 0.0, 0.3, 0.6];
    for (t, p) in ts.iter().zip(principal_curve_points(&sphere, &result, 0, &ts)?) {
        println!("  t = {t:+.1}: {}", fmt(p.as_vector()));
    }

    if let Some(dir) = out {
        let opts = ResultOptions {
            projections: true,
            ..ResultOptions::default()
        };
        let report = write_results(&sphere, &result, &dir, &opts)?;
        println!("wrote {} files to {}", report.files.len(), dir.display());
    }
    Ok(())
}
