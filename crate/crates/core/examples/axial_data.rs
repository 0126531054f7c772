//! Axial data on the real projective plane.
//!
//! Lines through the origin of R³ are embedded by `x ↦ xxᵀ`. The closed-form
//! covariance uses only the eigenvalues and eigenvectors of the averaged
//! matrix `n⁻¹ Σ x_i x_iᵀ`; it is reported both in the frame
//! `m_a mᵀ + m m_aᵀ` (the classical form) and in the unit frame used by the
//! rest of the library, which differ by a factor of two.

use extrinsic_pca::geometry::spectral_decompose;
use extrinsic_pca::vw::{prentice_covariance, rp_extrinsic_covariance, rp_fit};
use nalgebra::DVector;

fn fmt(v: &nalgebra::DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:+.4}")).collect();
    format!("({})", parts.join(", "))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // axes near the z axis, given with arbitrary signs
    let axes: Vec<DVector<f64>> = [
        [0.1, 0.05, 1.0],
        [-0.2, 0.02, -1.0],
        [0.05, -0.1, 1.0],
        [0.3, 0.1, 0.95],
        [-0.25, -0.05, -1.0],
        [0.0, 0.12, 1.0],
    ]
    .iter()
    .map(|a| DVector::from_column_slice(a))
    .collect();

    let fit = rp_fit(&axes)?;
    println!("mean axis: {}", fmt(&fit.mean));
    println!("eigenvalues of the averaged matrix: {}", fmt(&fit.eigenvalues));
    let classical = prentice_covariance(&fit, &axes)?;
    let unit = rp_extrinsic_covariance(&fit, &axes)?;
    for (label, m) in [
        ("classical frame", classical.as_matrix()),
        ("unit frame", unit.as_matrix()),
    ] {
        println!(
            "{label}: [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            m[(0, 0)],
            m[(0, 1)],
            m[(1, 0)],
            m[(1, 1)]
        );
    }
    let spectrum = spectral_decompose(&unit)?;
    println!(
        "principal axes explain {:.1}% and {:.1}%",
        100.0 * spectrum.eigenvalues[0] / unit.trace(),
        100.0 * spectrum.eigenvalues[1] / unit.trace()
    );
    Ok(())
}
