//! Linear-algebra types shared by every manifold backend, and the embedding
//! contract those backends fulfil.
//!
//! Ambient points are plain `DVector<f64>` in the canonical basis of `R^N`.
//! Backends whose natural ambient space is a matrix space (the Veronese–Whitney
//! backends) flatten it with an orthonormal basis, so Euclidean norms of
//! flattened vectors equal Hilbert–Schmidt norms of the matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{EpcaError, Result};

/// A point of the ambient Euclidean space `R^N`.
pub type AmbientVector = DVector<f64>;

const ORTHONORMAL_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-10;

/// Real symmetric matrix; symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(EpcaError::input(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(EpcaError::input("matrix has non-finite entries"));
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(Self(sym))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order and
/// eigenvectors stored as the columns of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    /// `Σ λ_i v_i v_iᵀ`
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let scaled = &self.eigenvectors * DMatrix::from_diagonal(&self.eigenvalues);
        scaled * self.eigenvectors.transpose()
    }
}

/// Flips `v` so that its entry of largest magnitude is non-negative
/// (first such entry on ties).
pub(crate) fn normalize_sign(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < 0.0 {
        v.neg_mut();
    }
}

/// Symmetric eigendecomposition with eigenvalues sorted descending and a
/// deterministic sign for each eigenvector.
pub fn spectral_decompose(a: &SymmetricMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: DVector::zeros(0),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = nalgebra::SymmetricEigen::try_new(a.as_matrix().clone(), f64::EPSILON, 0)
        .ok_or_else(|| EpcaError::input("symmetric eigensolver did not converge"))?;
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the solver's order among exact ties
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut eigenvalues = DVector::zeros(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues[dst] = eig.eigenvalues[src];
        let mut v = eig.eigenvectors.column(src).into_owned();
        normalize_sign(&mut v);
        eigenvectors.set_column(dst, &v);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Orthonormal basis of the orthogonal complement of the unit vector `u`,
/// returned as the columns of an `N x (N-1)` matrix.
///
/// Built from the Householder reflection that swaps `u` with the last
/// canonical axis `e_N`: the images of `e_1, …, e_{N-1}` under that
/// reflection are orthonormal and orthogonal to `u`.
pub fn complete_orthonormal_frame(u: &AmbientVector) -> Result<DMatrix<f64>> {
    let n = u.len();
    if n == 0 {
        return Err(EpcaError::input("cannot build a frame in dimension 0"));
    }
    if u.iter().any(|v| !v.is_finite()) || (u.norm() - 1.0).abs() > UNIT_TOL {
        return Err(EpcaError::input(format!(
            "frame completion needs a unit vector, got norm {}",
            u.norm()
        )));
    }
    let last = n - 1;
    let head_sq: f64 = u.rows(0, last).norm_squared();
    // w = u - e_N, with the last entry computed without cancellation
    let mut w = u.clone();
    w[last] = if u[last] > 0.0 {
        -head_sq / (1.0 + u[last])
    } else {
        u[last] - 1.0
    };
    let w_sq = w.norm_squared();

    let mut frame = DMatrix::zeros(n, last);
    for b in 0..last {
        let mut col = DVector::zeros(n);
        col[b] = 1.0;
        if w_sq > 0.0 {
            let scale = 2.0 * w[b] / w_sq;
            col.axpy(-scale, &w, 1.0);
        }
        frame.set_column(b, &col);
    }
    Ok(frame)
}

/// Orthonormal ambient vectors spanning the embedded tangent space at
/// `base_point` (an adapted frame), stored as matrix columns.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    base_point: AmbientVector,
    vectors: DMatrix<f64>,
}

impl TangentFrame {
    pub fn new(base_point: AmbientVector, vectors: DMatrix<f64>) -> Result<Self> {
        if vectors.nrows() != base_point.len() {
            return Err(EpcaError::input(format!(
                "frame vectors have length {}, base point has {}",
                vectors.nrows(),
                base_point.len()
            )));
        }
        let gram = vectors.transpose() * &vectors;
        let m = vectors.ncols();
        let defect = (gram - DMatrix::<f64>::identity(m, m)).abs().max();
        if m > 0 && defect > ORTHONORMAL_TOL {
            return Err(EpcaError::input(format!(
                "frame vectors are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Self { base_point, vectors })
    }

    pub fn base_point(&self) -> &AmbientVector {
        &self.base_point
    }

    /// Frame vectors as columns (`N x m`).
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// Ambient vector with the given frame coordinates.
    pub fn combine(&self, coords: &DVector<f64>) -> AmbientVector {
        &self.vectors * coords
    }

    /// Orthogonal projector onto the span of the frame.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.vectors * self.vectors.transpose()
    }
}

/// Coordinates `(e_1ᵀv, …, e_mᵀv)` of `v` with respect to the frame.
pub fn tangential_component(v: &AmbientVector, frame: &TangentFrame) -> Result<DVector<f64>> {
    if v.len() != frame.ambient_dim() {
        return Err(EpcaError::input(format!(
            "vector has dimension {}, frame lives in dimension {}",
            v.len(),
            frame.ambient_dim()
        )));
    }
    Ok(frame.vectors.tr_mul(v))
}

/// Biased sample covariance `n⁻¹ Σ (y_r − ȳ)(y_r − ȳ)ᵀ` and mean `ȳ`.
pub fn sample_covariance(points: &[AmbientVector]) -> Result<(AmbientVector, SymmetricMatrix)> {
    let Some(first) = points.first() else {
        return Err(EpcaError::input("empty sample"));
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(EpcaError::input("sample points have inconsistent dimensions"));
    }
    let n = points.len() as f64;
    let mut mean = DVector::zeros(dim);
    for p in points {
        mean += p;
    }
    mean /= n;
    let mut cov = DMatrix::zeros(dim, dim);
    for p in points {
        let c = p - &mean;
        cov.ger(1.0, &c, &c, 1.0);
    }
    cov /= n;
    Ok((mean, SymmetricMatrix::new(cov)?))
}

/// An embedding `j: M → R^N` together with its nearest-point projection.
///
/// All ambient quantities are expressed in an orthonormal basis of `R^N`.
pub trait EmbeddingBackend {
    type Point;

    fn ambient_dim(&self) -> usize;
    fn manifold_dim(&self) -> usize;

    /// `j(p)`
    fn embed(&self, p: &Self::Point) -> Result<AmbientVector>;

    /// `P_j(x)`: the unique nearest point of `j(M)`, or `FocalPoint`.
    fn project(&self, x: &AmbientVector) -> Result<AmbientVector>;

    /// Matrix of `d_x P_j` in the canonical basis (column `b` is `d_x P_j(e_b)`).
    fn projection_differential(&self, x: &AmbientVector) -> Result<DMatrix<f64>>;

    /// Adapted frame at `P_j(x)`.
    fn tangent_frame(&self, x: &AmbientVector) -> Result<TangentFrame>;

    fn is_focal(&self, x: &AmbientVector) -> bool {
        self.project(x).is_err()
    }

    /// Chord distance `‖j(p) − j(q)‖`.
    fn chord_distance(&self, p: &Self::Point, q: &Self::Point) -> Result<f64> {
        Ok((self.embed(p)? - self.embed(q)?).norm())
    }
}
