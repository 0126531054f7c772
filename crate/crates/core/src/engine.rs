//! Backend-agnostic extrinsic PCA: mean, adapted frame, covariance,
//! spectrum, per-sample scores and principal curves.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{EpcaError, Result};
use crate::geometry::{spectral_decompose, SymmetricMatrix, TangentFrame};
use crate::shape::{self, KendallShapes, PreShape, ShapeFrame};
use crate::sphere::{self, Sphere, SphereSample, UnitVector};
use crate::vw::C64;

/// Total variance at or below this is treated as a point mass.
pub const ZERO_VARIANCE: f64 = 1e-14;

/// Relative gap under which neighbouring eigenvalues are grouped together.
pub const MULTIPLICITY_RTOL: f64 = 1e-9;

/// Number of curve parameters used when none are given.
pub const DEFAULT_T_GRID: usize = 128;

/// Mean, frame, covariance and scores produced by a backend for one sample.
pub struct TangentModel<B: EpcaBackend + ?Sized> {
    pub mean: B::Point,
    pub frame: B::Frame,
    pub covariance: SymmetricMatrix,
    /// Tangential components of `j(x_i) − j(mean)`, one row per sample.
    pub scores: DMatrix<f64>,
}

/// A manifold with everything extrinsic PCA needs from it.
pub trait EpcaBackend {
    type Point: Clone;
    type Frame;
    /// Tangent vector at the mean in the backend's ambient representation.
    type Tangent: Clone;

    fn fit(&self, sample: &[Self::Point]) -> Result<TangentModel<Self>>;

    /// Tangent vector with frame coordinates `coords`.
    fn push_forward(&self, frame: &Self::Frame, coords: &DVector<f64>) -> Self::Tangent;

    /// [`push_forward`](Self::push_forward) applied to every column of `coords`.
    fn push_forward_all(&self, frame: &Self::Frame, coords: &DMatrix<f64>) -> Vec<Self::Tangent> {
        (0..coords.ncols())
            .map(|i| self.push_forward(frame, &coords.column(i).into_owned()))
            .collect()
    }

    /// Principal curve through `mean` along the unit tangent `direction`.
    fn curve_point(&self, mean: &Self::Point, direction: &Self::Tangent, t: f64) -> Result<Self::Point>;

    /// Re-projection onto the manifold of `j(mean) + s·direction`.
    fn restricted_point(&self, mean: &Self::Point, direction: &Self::Tangent, s: f64) -> Result<Self::Point>;

    /// Chord distance.
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<f64>;
}

/// Output of [`run_epca`].
pub struct EpcaResult<B: EpcaBackend + ?Sized> {
    pub extrinsic_mean: B::Point,
    pub frame: B::Frame,
    pub covariance: SymmetricMatrix,
    /// Descending.
    pub eigenvalues: DVector<f64>,
    /// Columns are eigenvectors in frame coordinates.
    pub tangent_eigenvectors: DMatrix<f64>,
    /// Eigenvectors pushed forward through the frame.
    pub ambient_eigenvectors: Vec<B::Tangent>,
    /// `λ_i / Σλ`, all zero when the sample has no spread.
    pub explained_ratio: DVector<f64>,
    pub scores: DMatrix<f64>,
    /// Eigenvalue groups with (numerically) equal values.
    pub groups: Vec<Vec<usize>>,
    /// Set when total variance is zero.
    pub zero_variance: bool,
    /// Set when fewer than two samples were given.
    pub single_sample: bool,
}

impl<B: EpcaBackend + ?Sized> EpcaResult<B> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn sample_size(&self) -> usize {
        self.scores.nrows()
    }

    /// Running sum of `explained_ratio`.
    pub fn cumulative_ratio(&self) -> DVector<f64> {
        let mut acc = 0.0;
        self.explained_ratio.map(|r| {
            acc += r;
            acc
        })
    }

    fn group_size(&self, component: usize) -> usize {
        self.groups.iter().find(|g| g.contains(&component)).map_or(1, Vec::len)
    }
}

/// Partitions descending eigenvalues into maximal runs whose consecutive
/// gaps are at most `tol`.
pub fn multiplicity_grouping(eigenvalues: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in eigenvalues.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (eigenvalues[i - 1] - v).abs() <= tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Tolerance used by [`run_epca`] for grouping eigenvalues.
pub fn default_multiplicity_tol(eigenvalues: &DVector<f64>) -> f64 {
    let top = eigenvalues.iter().copied().fold(0.0, f64::max);
    MULTIPLICITY_RTOL * top + 1e-15
}

pub fn run_epca<B: EpcaBackend + ?Sized>(sample: &[B::Point], backend: &B) -> Result<EpcaResult<B>> {
    if sample.is_empty() {
        return Err(EpcaError::input("cannot run extrinsic PCA on an empty sample"));
    }
    let TangentModel {
        mean,
        frame,
        covariance,
        mut scores,
    } = backend.fit(sample)?;
    if sample.len() < 2 {
        // The lone sample is the mean; drop rounding residue.
        scores.fill(0.0);
    }
    let spectrum = spectral_decompose(&covariance)?;
    let m = spectrum.eigenvalues.len();

    let total: f64 = spectrum.eigenvalues.iter().sum();
    let zero_variance = !(total > ZERO_VARIANCE);
    let explained_ratio = if zero_variance {
        DVector::zeros(m)
    } else {
        spectrum.eigenvalues.map(|l| l / total)
    };
    let ambient_eigenvectors = backend.push_forward_all(&frame, &spectrum.eigenvectors);
    let tol = default_multiplicity_tol(&spectrum.eigenvalues);
    let groups = multiplicity_grouping(spectrum.eigenvalues.as_slice(), tol);

    Ok(EpcaResult {
        extrinsic_mean: mean,
        frame,
        covariance,
        eigenvalues: spectrum.eigenvalues,
        tangent_eigenvectors: spectrum.eigenvectors,
        ambient_eigenvectors,
        explained_ratio,
        scores,
        groups,
        zero_variance,
        single_sample: sample.len() < 2,
    })
}

fn check_component<B: EpcaBackend + ?Sized>(result: &EpcaResult<B>, component: usize) -> Result<()> {
    if component >= result.dim() {
        return Err(EpcaError::input(format!(
            "component {component} out of range (tangent dimension {})",
            result.dim()
        )));
    }
    let multiplicity = result.group_size(component);
    if multiplicity > 1 {
        return Err(EpcaError::Multiplicity {
            component,
            multiplicity,
        });
    }
    Ok(())
}

/// `n` equally spaced parameters on `[−π/2, π/2]`.
pub fn t_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| -FRAC_PI_2 + i as f64 * std::f64::consts::PI / (n - 1) as f64)
            .collect(),
    }
}

/// Points of the principal curve of `component` at each parameter of `t_grid`.
pub fn principal_curve_points<B: EpcaBackend + ?Sized>(
    backend: &B,
    result: &EpcaResult<B>,
    component: usize,
    t_grid: &[f64],
) -> Result<Vec<B::Point>> {
    check_component(result, component)?;
    let direction = &result.ambient_eigenvectors[component];
    t_grid
        .iter()
        .map(|&t| backend.curve_point(&result.extrinsic_mean, direction, t))
        .collect()
}

/// Projects every sample onto the principal curve of `component`: keep only
/// its score along the component, then re-project onto the manifold.
pub fn project_sample_to_pc<B: EpcaBackend + ?Sized>(
    backend: &B,
    result: &EpcaResult<B>,
    component: usize,
) -> Result<Vec<B::Point>> {
    check_component(result, component)?;
    let direction = &result.ambient_eigenvectors[component];
    let v = result.tangent_eigenvectors.column(component);
    (0..result.sample_size())
        .map(|i| {
            let s = result.scores.row(i).transpose().dot(&v);
            backend.restricted_point(&result.extrinsic_mean, direction, s)
        })
        .collect()
}

impl EpcaBackend for Sphere {
    type Point = UnitVector;
    type Frame = TangentFrame;
    type Tangent = DVector<f64>;

    fn fit(&self, sample: &[UnitVector]) -> Result<TangentModel<Self>> {
        let sample = SphereSample::new(sample.to_vec())?;
        if sample.dim() != self.dim() {
            return Err(EpcaError::input(format!(
                "sample lives on S^{}, backend is S^{}",
                sample.dim(),
                self.dim()
            )));
        }
        let mean = sphere::sphere_extrinsic_mean(&sample)?;
        let frame = crate::geometry::EmbeddingBackend::tangent_frame(self, mean.as_vector())?;
        let covariance = sphere::sphere_extrinsic_covariance(&sample, &mean, &frame)?;
        let mut scores = DMatrix::zeros(sample.len(), frame.dim());
        for (i, p) in sample.points().iter().enumerate() {
            let t = frame.vectors().tr_mul(&(p.as_vector() - mean.as_vector()));
            scores.set_row(i, &t.transpose());
        }
        Ok(TangentModel {
            mean,
            frame,
            covariance,
            scores,
        })
    }

    fn push_forward(&self, frame: &TangentFrame, coords: &DVector<f64>) -> DVector<f64> {
        frame.combine(coords)
    }

    fn curve_point(&self, mean: &UnitVector, direction: &DVector<f64>, t: f64) -> Result<UnitVector> {
        sphere::sphere_pc_curve(mean, direction, t)
    }

    fn restricted_point(&self, mean: &UnitVector, direction: &DVector<f64>, s: f64) -> Result<UnitVector> {
        sphere::sphere_restricted_point(mean, direction, s)
    }

    fn distance(&self, a: &UnitVector, b: &UnitVector) -> Result<f64> {
        crate::geometry::EmbeddingBackend::chord_distance(self, a, b)
    }
}

impl EpcaBackend for KendallShapes {
    type Point = PreShape;
    type Frame = ShapeFrame;
    type Tangent = DVector<C64>;

    fn fit(&self, sample: &[PreShape]) -> Result<TangentModel<Self>> {
        if let Some(p) = sample.iter().find(|p| p.k() != self.k()) {
            return Err(EpcaError::input(format!(
                "expected {}-point shapes, got {}",
                self.k(),
                p.k()
            )));
        }
        let fit = shape::shape_fit(sample)?;
        let covariance = shape::shape_covariance(&fit, sample)?;
        let scores = shape::shape_scores(&fit, sample)?;
        Ok(TangentModel {
            mean: fit.mean,
            frame: fit.frame,
            covariance,
            scores,
        })
    }

    fn push_forward(&self, frame: &ShapeFrame, coords: &DVector<f64>) -> DVector<C64> {
        frame.combine(coords)
    }

    fn push_forward_all(&self, frame: &ShapeFrame, coords: &DMatrix<f64>) -> Vec<DVector<C64>> {
        frame.combine_columns(coords)
    }

    fn curve_point(&self, mean: &PreShape, direction: &DVector<C64>, t: f64) -> Result<PreShape> {
        shape::shape_pc_curve(mean, direction, t)
    }

    fn restricted_point(&self, mean: &PreShape, direction: &DVector<C64>, s: f64) -> Result<PreShape> {
        shape::shape_restricted_point(mean, direction, s)
    }

    fn distance(&self, a: &PreShape, b: &PreShape) -> Result<f64> {
        shape::shape_chord_distance(a, b)
    }
}
