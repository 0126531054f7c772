//! Extrinsic PCA of planar contours in Kendall's shape space.
//!
//! Reads the bundled 16-contour dataset (500 points each), resamples to
//! arclength-uniform points, and reports the scree, the mean contour and
//! the per-contour scores on the first two components.
//!
//! ```text
//! cargo run --release --example shape_pca -- [manifest.json]
//! ```

use std::path::PathBuf;

use extrinsic_pca::engine::run_epca;
use extrinsic_pca::io::{read_contours, ContourFormat};
use extrinsic_pca::shape::{Contour, KendallShapes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let manifest = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/butterfly_substitute/manifest.json"));
    let dataset = read_contours(&manifest, ContourFormat::Auto, None)?;
    let shapes = dataset.preshapes()?;
    let backend = KendallShapes::new(dataset.common_k()?)?;
    println!(
        "{}: {} contours with {} points, shape space of dimension {}",
        dataset.name,
        dataset.len(),
        backend.k(),
        2 * backend.k() - 4
    );

    let result = run_epca(&shapes, &backend)?;
    let cumulative = result.cumulative_ratio();
    println!("scree:");
    for i in 0..6 {
        let bar = "#".repeat((60.0 * result.explained_ratio[i]).round() as usize);
        println!(
            "  {:>2} {:6.2}% {:6.2}%  {bar}",
            i + 1,
            100.0 * result.explained_ratio[i],
            100.0 * cumulative[i]
        );
    }

    let mean = Contour::new(result.extrinsic_mean.points())?;
    println!(
        "mean contour: perimeter {:.4}, area {:.4}, total curvature {:.3}",
        mean.perimeter(),
        mean.signed_area(),
        mean.total_curvature()
    );
    println!("scores on the first two components:");
    for (i, row) in result.scores.row_iter().enumerate() {
        println!(
            "  contour {i:>2}: {:+.4} {:+.4}",
            row.dot(&result.tangent_eigenvectors.column(0).transpose()),
            row.dot(&result.tangent_eigenvectors.column(1).transpose())
        );
    }
    Ok(())
}
