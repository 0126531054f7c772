//! Extrinsic means, covariances and principal components for data on
//! embedded manifolds.
//!
//! Two backends are provided: the unit sphere `S^d ⊂ R^{d+1}` with the
//! inclusion map, and Kendall's planar shape space `CP^{k−2}` with the
//! Veronese-Whitney embedding `z ↦ zz*/‖z‖²`. Both plug into
//! [`engine::run_epca`], which returns the extrinsic mean, the covariance in
//! an adapted tangent frame, its spectrum and per-sample scores.
//!
//! [`oracle`] and [`verify`] hold slow reference computations (grid
//! minimization of the Fréchet function, finite-difference differentials)
//! used to check the closed forms.
//!
//! ```
//! use extrinsic_pca::engine::run_epca;
//! use extrinsic_pca::sphere::{Sphere, UnitVector};
//!
//! let sample: Vec<UnitVector> = [[1.0, 0.1, 0.0], [1.0, -0.1, 0.05], [1.0, 0.0, -0.05]]
//!     .iter()
//!     .map(|p| UnitVector::new(nalgebra::DVector::from_column_slice(p).normalize()).unwrap())
//!     .collect();
//! let result = run_epca(&sample, &Sphere::new(2).unwrap()).unwrap();
//! assert!(result.extrinsic_mean.as_vector()[0] > 0.99);
//! assert!(result.eigenvalues[0] >= result.eigenvalues[1]);
//! ```

pub mod engine;
pub mod error;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod shape;
pub mod sphere;
pub mod verify;
pub mod vw;
