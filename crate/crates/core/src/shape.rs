//! Direct-similarity shapes of planar contours.
//!
//! A contour with `k` points is identified with a vector of `C^k`. Centering
//! and scaling to unit norm give a preshape; the shape class is the preshape
//! up to a unit complex factor (rotation). Shapes are embedded with the
//! Veronese–Whitney map `[z] ↦ zz*`, so the extrinsic mean is the top
//! eigenvector of the averaged `zz*` and the covariance has a closed form
//! in the eigenvalue gaps (see [`crate::vw`]).
//!
//! Internally the centered subspace of `C^k` is identified with `C^{k-1}` via
//! the Helmert basis, so the shape space is `CP^{k-2}` of real dimension
//! `2k − 4` and the constant direction never enters a tangent frame.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{EpcaError, Result};
use crate::geometry::{AmbientVector, EmbeddingBackend, SymmetricMatrix, TangentFrame};
use crate::vw::{self, normalize_phase, outer, VwFit, C64};

const PRESHAPE_TOL: f64 = 1e-10;

/// Closed polygonal contour; the first point is the starting landmark.
/// Stored counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    points: Vec<[f64; 2]>,
}

fn signed_area_of(points: &[[f64; 2]]) -> f64 {
    let k = points.len();
    let mut twice = 0.0;
    for i in 0..k {
        let [x0, y0] = points[i];
        let [x1, y1] = points[(i + 1) % k];
        twice += x0 * y1 - x1 * y0;
    }
    0.5 * twice
}

impl Contour {
    /// Validates the points and reverses clockwise input (keeping the first
    /// point as the starting landmark).
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        let k = points.len();
        if k < 3 {
            return Err(EpcaError::input(format!("a contour needs at least 3 points, got {k}")));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(EpcaError::input("contour has non-finite coordinates"));
        }
        for i in 0..k {
            if points[i] == points[(i + 1) % k] {
                return Err(EpcaError::input(format!(
                    "contour points {i} and {} coincide",
                    (i + 1) % k
                )));
            }
        }
        let area = signed_area_of(&points);
        if area == 0.0 {
            return Err(EpcaError::input("contour encloses zero area"));
        }
        let points = if area < 0.0 {
            let mut rev = Vec::with_capacity(k);
            rev.push(points[0]);
            rev.extend(points[1..].iter().rev());
            rev
        } else {
            points
        };
        Ok(Self { points })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area_of(&self.points)
    }

    /// Length of the closed polygon.
    pub fn perimeter(&self) -> f64 {
        edge_lengths(&self.points).iter().sum()
    }

    /// Sum of absolute turning angles at the vertices.
    pub fn total_curvature(&self) -> f64 {
        let k = self.points.len();
        (0..k)
            .map(|i| {
                let p = self.points[(i + k - 1) % k];
                let q = self.points[i];
                let r = self.points[(i + 1) % k];
                let (ax, ay) = (q[0] - p[0], q[1] - p[1]);
                let (bx, by) = (r[0] - q[0], r[1] - q[1]);
                (ax * by - ay * bx).atan2(ax * bx + ay * by).abs()
            })
            .sum()
    }

    /// Applies `z ↦ scale·e^{iθ}·z + (tx, ty)` to every point.
    pub fn similarity(&self, rotation: f64, scale: f64, translation: [f64; 2]) -> Result<Self> {
        let (s, c) = rotation.sin_cos();
        let points = self
            .points
            .iter()
            .map(|&[x, y]| {
                [
                    scale * (c * x - s * y) + translation[0],
                    scale * (s * x + c * y) + translation[1],
                ]
            })
            .collect();
        Self::new(points)
    }

    fn as_complex(&self) -> DVector<C64> {
        DVector::from_iterator(self.points.len(), self.points.iter().map(|&[x, y]| C64::new(x, y)))
    }
}

fn edge_lengths(points: &[[f64; 2]]) -> Vec<f64> {
    let k = points.len();
    (0..k)
        .map(|i| {
            let [x0, y0] = points[i];
            let [x1, y1] = points[(i + 1) % k];
            (x1 - x0).hypot(y1 - y0)
        })
        .collect()
}

/// `m` points at arclength `i·L/m` along the closed polygon, starting at the
/// first point, by linear interpolation along edges.
pub fn resample_arclength(c: &Contour, m: usize) -> Result<Contour> {
    if m < 3 {
        return Err(EpcaError::input(format!("resampling needs at least 3 points, got {m}")));
    }
    let lengths = edge_lengths(c.points());
    let total: f64 = lengths.iter().sum();
    if !(total > 0.0) {
        return Err(EpcaError::input("contour has zero perimeter"));
    }
    let k = c.len();
    let mut out = Vec::with_capacity(m);
    let mut edge = 0;
    let mut edge_start = 0.0;
    for i in 0..m {
        let target = i as f64 * total / m as f64;
        while edge + 1 < k && edge_start + lengths[edge] <= target {
            edge_start += lengths[edge];
            edge += 1;
        }
        let [x0, y0] = c.points()[edge];
        let [x1, y1] = c.points()[(edge + 1) % k];
        let t = ((target - edge_start) / lengths[edge]).clamp(0.0, 1.0);
        out.push([x0 + t * (x1 - x0), y0 + t * (y1 - y0)]);
    }
    Contour::new(out)
}

/// Centered, unit-norm representative of a shape class.
#[derive(Debug, Clone, PartialEq)]
pub struct PreShape {
    z: DVector<C64>,
}

impl PreShape {
    /// Wraps `z`, which must already be centered and of unit norm.
    pub fn new(z: DVector<C64>) -> Result<Self> {
        if z.len() < 3 {
            return Err(EpcaError::input("preshapes need at least 3 entries"));
        }
        let sum: C64 = z.iter().sum();
        if sum.norm() > PRESHAPE_TOL {
            return Err(EpcaError::input(format!(
                "preshape is not centered (|sum| = {:e})",
                sum.norm()
            )));
        }
        if (z.norm() - 1.0).abs() > PRESHAPE_TOL {
            return Err(EpcaError::input(format!(
                "preshape does not have unit norm ({})",
                z.norm()
            )));
        }
        Ok(Self { z })
    }

    /// Centers and normalizes an arbitrary nonzero vector.
    pub fn from_raw(z: DVector<C64>) -> Result<Self> {
        if z.len() < 3 {
            return Err(EpcaError::input("preshapes need at least 3 entries"));
        }
        let centroid: C64 = z.iter().sum::<C64>() / C64::new(z.len() as f64, 0.0);
        let centered = z.map(|v| v - centroid);
        let norm = centered.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(EpcaError::input("configuration is degenerate (all points coincide)"));
        }
        Ok(Self {
            z: centered / C64::new(norm, 0.0),
        })
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.z
    }

    pub fn k(&self) -> usize {
        self.z.len()
    }

    /// Same shape class, representative with its largest-modulus entry real positive.
    pub fn phase_normalized(&self) -> Self {
        let mut z = self.z.clone();
        normalize_phase(&mut z);
        Self { z }
    }

    /// Rotated representative `e^{iθ} z`.
    pub fn rotated(&self, theta: f64) -> Self {
        Self {
            z: &self.z * C64::from_polar(1.0, theta),
        }
    }

    /// The representative as planar points.
    pub fn points(&self) -> Vec<[f64; 2]> {
        self.z.iter().map(|c| [c.re, c.im]).collect()
    }

    fn helmert(&self) -> DVector<C64> {
        helmert_forward(&self.z)
    }
}

pub fn to_preshape(c: &Contour) -> Result<PreShape> {
    PreShape::from_raw(c.as_complex())
}

/// Coordinates of a vector of `C^k` in the Helmert basis of the centered
/// subspace (`k − 1` entries). Isometric on centered vectors.
pub fn helmert_forward(z: &DVector<C64>) -> DVector<C64> {
    let k = z.len();
    let mut u = DVector::zeros(k.saturating_sub(1));
    let mut prefix = C64::new(0.0, 0.0);
    for j in 1..k {
        prefix += z[j - 1];
        let jf = j as f64;
        u[j - 1] = (prefix - z[j] * jf) / (jf * (jf + 1.0)).sqrt();
    }
    u
}

/// Centered vector of `C^k` with Helmert coordinates `u` (length `k − 1`).
pub fn helmert_inverse(u: &DVector<C64>) -> DVector<C64> {
    let k = u.len() + 1;
    let mut z = DVector::zeros(k);
    let mut suffix = C64::new(0.0, 0.0);
    for i in (0..k).rev() {
        let mut zi = suffix;
        if i >= 1 {
            let jf = i as f64;
            zi -= u[i - 1] * (jf / (jf * (jf + 1.0)).sqrt());
            suffix += u[i - 1] / (jf * (jf + 1.0)).sqrt();
        }
        z[i] = zi;
    }
    z
}

/// Hermitian rank-one projector `zz*` of a preshape.
#[derive(Debug, Clone, PartialEq)]
pub struct VwMatrix(DMatrix<C64>);

impl VwMatrix {
    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

pub fn vw_embed(p: &PreShape) -> VwMatrix {
    VwMatrix(outer(&p.z))
}

/// `√(2(1 − |⟨z, w⟩|²))`, the Hilbert–Schmidt distance between `zz*` and `ww*`.
pub fn shape_chord_distance(p: &PreShape, q: &PreShape) -> Result<f64> {
    if p.k() != q.k() {
        return Err(EpcaError::input(format!("shapes have {} and {} points", p.k(), q.k())));
    }
    Ok(vw::unit_chord_distance(&p.z, &q.z))
}

/// Tangent frame at the VW mean, kept in preshape form: the frame vector for
/// a direction `w` is `(w m* + m w*)/√2`, with `m` the mean preshape.
#[derive(Debug, Clone)]
pub struct ShapeFrame {
    /// Mean preshape (phase normalized), length `k`.
    pub mean: DVector<C64>,
    /// Horizontal tangent directions in `C^k`, `2k − 4` of them: pairs
    /// `m_a, i·m_a` for the non-top eigenvectors, largest eigenvalue first.
    pub directions: Vec<DVector<C64>>,
    /// Eigenvalue gaps `η_N − η_a`, one per direction.
    pub gaps: Vec<f64>,
}

impl ShapeFrame {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Horizontal tangent vector with the given real frame coordinates.
    pub fn combine(&self, coords: &DVector<f64>) -> DVector<C64> {
        let mut w = DVector::zeros(self.mean.len());
        for (d, &c) in self.directions.iter().zip(coords.iter()) {
            w.axpy(C64::new(c, 0.0), d, C64::new(1.0, 0.0));
        }
        w
    }

    /// [`combine`](Self::combine) for every column of `coords`, as two real
    /// matrix products.
    pub fn combine_columns(&self, coords: &DMatrix<f64>) -> Vec<DVector<C64>> {
        let k = self.mean.len();
        let re = DMatrix::from_fn(k, self.dim(), |i, j| self.directions[j][i].re) * coords;
        let im = DMatrix::from_fn(k, self.dim(), |i, j| self.directions[j][i].im) * coords;
        (0..coords.ncols())
            .map(|c| DVector::from_fn(k, |i, _| C64::new(re[(i, c)], im[(i, c)])))
            .collect()
    }

    /// Frame vectors as flattened Hermitian matrices in Helmert coordinates,
    /// the ambient space of [`KendallShapes`]. Dense: `(k−1)² x (2k−4)`.
    pub fn to_tangent_frame(&self) -> Result<TangentFrame> {
        let m = helmert_forward(&self.mean);
        let base = vw::hermitian_to_vec(&outer(&m));
        let mut vectors = DMatrix::zeros(base.len(), self.directions.len());
        for (i, w) in self.directions.iter().enumerate() {
            let wm = helmert_forward(w) * m.adjoint();
            let e = (&wm + wm.adjoint()) * C64::new(1.0 / SQRT_2, 0.0);
            vectors.set_column(i, &vw::hermitian_to_vec(&e));
        }
        TangentFrame::new(base, vectors)
    }
}

/// VW mean, frame and spectral data for a sample of preshapes.
#[derive(Debug, Clone)]
pub struct ShapeFit {
    pub mean: PreShape,
    pub frame: ShapeFrame,
    /// Fit in Helmert coordinates (mean phase matched to `mean`).
    pub vw: VwFit,
}

fn helmert_sample(sample: &[PreShape]) -> Result<Vec<DVector<C64>>> {
    let Some(first) = sample.first() else {
        return Err(EpcaError::input("empty shape sample"));
    };
    if sample.iter().any(|p| p.k() != first.k()) {
        return Err(EpcaError::input(
            "shapes in a sample must have the same number of points",
        ));
    }
    Ok(sample.iter().map(PreShape::helmert).collect())
}

/// Fits the VW mean and the adapted frame built from the eigenvectors of
/// `K = n⁻¹ Σ z_i z_i*` (restricted to centered vectors).
pub fn shape_fit(sample: &[PreShape]) -> Result<ShapeFit> {
    let u = helmert_sample(sample)?;
    let fit = vw::vw_fit(&u)?;
    let mut z = PreShape::from_raw(helmert_inverse(&fit.mean))?.z;
    let phase = normalize_phase(&mut z);
    let fit = fit.with_mean_phase(phase);
    let directions = fit.directions.iter().map(helmert_inverse).collect();
    let frame = ShapeFrame {
        mean: z.clone(),
        directions,
        gaps: fit.gaps.clone(),
    };
    Ok(ShapeFit {
        mean: PreShape { z },
        frame,
        vw: fit,
    })
}

/// VW sample mean: top eigenvector of the averaged `zz*`, phase normalized.
pub fn vw_mean(sample: &[PreShape]) -> Result<PreShape> {
    Ok(shape_fit(sample)?.mean)
}

/// Adapted frame at the VW mean of `sample`.
pub fn vw_tangent_frame(sample: &[PreShape]) -> Result<ShapeFrame> {
    Ok(shape_fit(sample)?.frame)
}

/// Sample extrinsic covariance in the frame of `fit`
/// (`(2k−4) x (2k−4)`, realified closed form).
#[derive(Debug, Clone)]
pub struct ShapeCovariance {
    pub matrix: SymmetricMatrix,
    pub frame: ShapeFrame,
}

pub fn shape_covariance(fit: &ShapeFit, sample: &[PreShape]) -> Result<SymmetricMatrix> {
    vw::vw_extrinsic_covariance(&fit.vw, &helmert_sample(sample)?)
}

#[doc(hidden)]
/// [`shape_covariance`] with a deliberate sign error, for the verification canary.
pub fn shape_covariance_mutated(fit: &ShapeFit, sample: &[PreShape]) -> Result<SymmetricMatrix> {
    vw::vw_extrinsic_covariance_mutated(&fit.vw, &helmert_sample(sample)?)
}

pub fn vw_extrinsic_covariance(sample: &[PreShape]) -> Result<ShapeCovariance> {
    let fit = shape_fit(sample)?;
    let matrix = shape_covariance(&fit, sample)?;
    Ok(ShapeCovariance {
        matrix,
        frame: fit.frame,
    })
}

/// Tangential components of `j(z_i) − j(mean)` in the frame of `fit`.
pub fn shape_scores(fit: &ShapeFit, sample: &[PreShape]) -> Result<DMatrix<f64>> {
    vw::vw_tangent_scores(&fit.vw, &helmert_sample(sample)?)
}

fn check_horizontal(mean: &PreShape, direction: &DVector<C64>) -> Result<()> {
    if direction.len() != mean.k() {
        return Err(EpcaError::input("direction and mean have different lengths"));
    }
    if (direction.norm() - 1.0).abs() > PRESHAPE_TOL {
        return Err(EpcaError::input("direction must have unit norm"));
    }
    let inner = mean.z.dotc(direction).norm();
    let sum: C64 = direction.iter().sum();
    if inner > PRESHAPE_TOL || sum.norm() > PRESHAPE_TOL {
        return Err(EpcaError::input(format!(
            "direction is not a horizontal tangent vector at the mean (|<m,w>| = {inner:e}, |sum| = {:e})",
            sum.norm()
        )));
    }
    Ok(())
}

/// Point at parameter `t` on the principal curve through `mean` along the
/// horizontal unit direction `direction`.
pub fn shape_pc_curve(mean: &PreShape, direction: &DVector<C64>, t: f64) -> Result<PreShape> {
    check_horizontal(mean, direction)?;
    let z = mean.as_vector() * C64::new(t.cos(), 0.0) + direction * C64::new(t.sin(), 0.0);
    PreShape::from_raw(z)
}

/// `P_j(j(mean) + s·e)` for the unit frame vector `e` of `direction`.
///
/// On the span of `{mean, direction}` this is the top eigenvector of
/// `[[1, s/√2], [s/√2, 0]]`, i.e. the curve point at `½·atan(√2·s)`.
pub fn shape_restricted_point(mean: &PreShape, direction: &DVector<C64>, s: f64) -> Result<PreShape> {
    shape_pc_curve(mean, direction, 0.5 * (SQRT_2 * s).atan())
}

/// Planar shapes of `k`-point contours with the VW embedding.
///
/// The ambient space is the Hermitian `(k−1) x (k−1)` matrices in Helmert
/// coordinates (flattened, `(k−1)²` reals), isometric to the VW image in
/// `k x k` matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KendallShapes {
    k: usize,
    inner: vw::ComplexProjective,
}

impl KendallShapes {
    pub fn new(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(EpcaError::input("planar shapes need at least 3 points"));
        }
        Ok(Self {
            k,
            inner: vw::ComplexProjective::new(k - 1)?,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl EmbeddingBackend for KendallShapes {
    type Point = PreShape;

    fn ambient_dim(&self) -> usize {
        (self.k - 1) * (self.k - 1)
    }

    fn manifold_dim(&self) -> usize {
        2 * self.k - 4
    }

    fn embed(&self, p: &PreShape) -> Result<AmbientVector> {
        if p.k() != self.k {
            return Err(EpcaError::input(format!("expected {} points, got {}", self.k, p.k())));
        }
        Ok(vw::hermitian_to_vec(&outer(&p.helmert())))
    }

    fn project(&self, x: &AmbientVector) -> Result<AmbientVector> {
        self.inner.project(x)
    }

    fn projection_differential(&self, x: &AmbientVector) -> Result<DMatrix<f64>> {
        self.inner.projection_differential(x)
    }

    fn tangent_frame(&self, x: &AmbientVector) -> Result<TangentFrame> {
        self.inner.tangent_frame(x)
    }

    fn chord_distance(&self, p: &PreShape, q: &PreShape) -> Result<f64> {
        shape_chord_distance(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vw::max_modulus;

    fn square() -> Contour {
        Contour::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    fn blob(k: usize, phase: f64) -> Contour {
        let pts = (0..k)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                let r = 1.0 + 0.3 * (2.0 * t + phase).cos() + 0.1 * (3.0 * t).sin();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        Contour::new(pts).unwrap()
    }

    #[test]
    fn contour_validation() {
        assert!(Contour::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(Contour::new(vec![[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]).is_err());
        let cw = Contour::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(cw.signed_area() > 0.0);
        assert_eq!(cw.points()[0], [0.0, 0.0]);
        assert_eq!(cw, square());
    }

    #[test]
    fn preshape_of_square() {
        let p = to_preshape(&square()).unwrap();
        assert!((p.as_vector().norm() - 1.0).abs() < 1e-15);
        assert!(p.as_vector().iter().sum::<C64>().norm() < 1e-15);
    }

    #[test]
    fn preshape_is_translation_and_scale_invariant() {
        let c = blob(40, 0.3);
        let p = to_preshape(&c).unwrap();
        let moved = to_preshape(&c.similarity(0.0, 1.0, [5.0, 7.0]).unwrap()).unwrap();
        let scaled = to_preshape(&c.similarity(0.0, 3.0, [0.0, 0.0]).unwrap()).unwrap();
        assert!(max_modulus(&(p.as_vector() - moved.as_vector())) < 1e-12);
        assert!(max_modulus(&(p.as_vector() - scaled.as_vector())) < 1e-12);
    }

    #[test]
    fn degenerate_preshape_rejected() {
        let z = DVector::from_element(4, C64::new(1.0, 2.0));
        assert!(matches!(PreShape::from_raw(z), Err(EpcaError::Input(_))));
    }

    #[test]
    fn resample_square_to_eight() {
        let r = resample_arclength(&square(), 8).unwrap();
        let expected = [
            [0.0, 0.0],
            [0.5, 0.0],
            [1.0, 0.0],
            [1.0, 0.5],
            [1.0, 1.0],
            [0.5, 1.0],
            [0.0, 1.0],
            [0.0, 0.5],
        ];
        for (p, q) in r.points().iter().zip(expected.iter()) {
            assert!(
                (p[0] - q[0]).abs() < 1e-15 && (p[1] - q[1]).abs() < 1e-15,
                "{p:?} vs {q:?}"
            );
        }
        assert!((r.perimeter() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn resample_equally_spaced_is_identity() {
        let c = Contour::new(
            (0..12)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / 12.0;
                    [t.cos(), t.sin()]
                })
                .collect(),
        )
        .unwrap();
        let r = resample_arclength(&c, 12).unwrap();
        for (p, q) in r.points().iter().zip(c.points()) {
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_never_lengthens() {
        let c = blob(37, 1.0);
        for m in [3, 10, 37, 80, 200] {
            let r = resample_arclength(&c, m).unwrap();
            assert!(r.perimeter() <= c.perimeter() + 1e-12);
        }
        // every vertex is hit when m is a multiple of k for the square
        let r = resample_arclength(&square(), 12).unwrap();
        assert!((r.perimeter() - 4.0).abs() < 1e-9);
        assert!(resample_arclength(&square(), 2).is_err());
    }

    #[test]
    fn helmert_is_an_isometry_of_centered_vectors() {
        let p = to_preshape(&blob(9, 0.1)).unwrap();
        let u = helmert_forward(p.as_vector());
        assert_eq!(u.len(), 8);
        assert!((u.norm() - 1.0).abs() < 1e-14);
        assert!(max_modulus(&(helmert_inverse(&u) - p.as_vector())) < 1e-14);
    }

    #[test]
    fn vw_embedding_identities() {
        let e1 = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        let h = outer(&e1);
        assert_eq!(h[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(h.iter().filter(|z| z.norm() > 0.0).count(), 1);

        let p = to_preshape(&blob(15, 0.7)).unwrap();
        let a = vw_embed(&p);
        let b = vw_embed(&p.rotated(1.234));
        assert!(max_modulus(&(a.as_matrix() - b.as_matrix())) < 1e-12);
        assert!((a.trace() - 1.0).abs() < 1e-10);
        let sq = a.as_matrix() * a.as_matrix();
        assert!(max_modulus(&(sq - a.as_matrix())) < 1e-10);
    }

    #[test]
    fn vw_mean_of_one_shape_class() {
        let p = to_preshape(&blob(20, 0.4)).unwrap();
        let m = vw_mean(std::slice::from_ref(&p)).unwrap();
        assert!(shape_chord_distance(&m, &p).unwrap() < 1e-7);
        assert_eq!(m, m.phase_normalized());
        let rotated = vec![p.clone(), p.rotated(0.8), p.rotated(-2.1)];
        let m2 = vw_mean(&rotated).unwrap();
        assert!(shape_chord_distance(&m2, &p).unwrap() < 1e-7);
        assert!(max_modulus(&(m2.as_vector() - m.as_vector())) < 1e-10);
    }

    #[test]
    fn frame_dimensions_and_orthonormality() {
        let sample: Vec<PreShape> = (0..4).map(|i| to_preshape(&blob(3, i as f64)).unwrap()).collect();
        let frame = vw_tangent_frame(&sample).unwrap();
        assert_eq!(frame.dim(), 2);
        let sample: Vec<PreShape> = (0..5).map(|i| to_preshape(&blob(7, 0.3 * i as f64)).unwrap()).collect();
        let frame = vw_tangent_frame(&sample).unwrap();
        assert_eq!(frame.dim(), 10);
        // real inner products of directions are orthonormal, and directions are horizontal
        for (i, a) in frame.directions.iter().enumerate() {
            assert!(frame.mean.dotc(a).norm() < 1e-10);
            assert!(a.iter().sum::<C64>().norm() < 1e-10);
            for (j, b) in frame.directions.iter().enumerate() {
                let ip = a.dotc(b).re;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-10);
            }
        }
        let materialized = frame.to_tangent_frame().unwrap();
        assert_eq!(materialized.dim(), 10);
    }

    #[test]
    fn identical_shapes_have_zero_covariance() {
        let p = to_preshape(&blob(10, 0.2)).unwrap();
        let cov = vw_extrinsic_covariance(&[p.clone(), p.rotated(1.0), p.rotated(2.0)]).unwrap();
        assert!(cov.matrix.as_matrix().amax() < 1e-12);
    }

    #[test]
    fn chord_distance_examples() {
        let p = to_preshape(&blob(12, 0.0)).unwrap();
        let q = to_preshape(&blob(12, 1.3)).unwrap();
        assert!(shape_chord_distance(&p, &p).unwrap() < 1e-7);
        let d = shape_chord_distance(&p, &q).unwrap();
        assert!((shape_chord_distance(&p.rotated(0.9), &q).unwrap() - d).abs() < 1e-12);
        assert!((shape_chord_distance(&q, &p).unwrap() - d).abs() < 1e-15);
        let hs = (vw_embed(&p).as_matrix() - vw_embed(&q).as_matrix()).norm();
        assert!((d - hs).abs() < 1e-12);

        // orthogonal preshapes on k = 4
        let a = PreShape::from_raw(DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]))
        .unwrap();
        let b = PreShape::from_raw(DVector::from_vec(vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
        ]))
        .unwrap();
        assert!((shape_chord_distance(&a, &b).unwrap() - SQRT_2).abs() < 1e-15);
        assert!(shape_chord_distance(&a, &to_preshape(&square()).unwrap()).is_ok());
        assert!(shape_chord_distance(&a, &p).is_err());
    }

    #[test]
    fn pc_curve_properties() {
        let sample: Vec<PreShape> = (0..6)
            .map(|i| to_preshape(&blob(16, 0.25 * i as f64)).unwrap())
            .collect();
        let fit = shape_fit(&sample).unwrap();
        let w = &fit.frame.directions[0];
        let start = shape_pc_curve(&fit.mean, w, 0.0).unwrap();
        assert!(max_modulus(&(start.as_vector() - fit.mean.as_vector())) < 1e-12);
        let mut last = -1.0;
        for i in 0..60 {
            let t = i as f64 * (std::f64::consts::FRAC_PI_2 - 1e-3) / 59.0;
            let p = shape_pc_curve(&fit.mean, w, t).unwrap();
            assert!(p.as_vector().iter().sum::<C64>().norm() < 1e-10);
            assert!((p.as_vector().norm() - 1.0).abs() < 1e-10);
            let d = shape_chord_distance(&fit.mean, &p).unwrap();
            assert!(d > last);
            last = d;
            let neg = shape_pc_curve(&fit.mean, w, -t).unwrap();
            assert!((shape_chord_distance(&fit.mean, &neg).unwrap() - d).abs() < 1e-9);
        }
        let bad = fit.mean.as_vector().clone();
        assert!(shape_pc_curve(&fit.mean, &bad, 0.1).is_err());
    }

    #[test]
    fn restricted_point_matches_explicit_reprojection() {
        let sample: Vec<PreShape> = (0..5).map(|i| to_preshape(&blob(6, 0.4 * i as f64)).unwrap()).collect();
        let fit = shape_fit(&sample).unwrap();
        let backend = KendallShapes::new(6).unwrap();
        let frame = fit.frame.to_tangent_frame().unwrap();
        for (col, s) in [(0usize, 0.3), (1, -0.8), (3, 1.7)] {
            let ambient = frame.base_point() + frame.vectors().column(col) * s;
            let reprojected = backend.project(&ambient).unwrap();
            let closed = shape_restricted_point(&fit.mean, &fit.frame.directions[col], s).unwrap();
            let embedded = backend.embed(&closed).unwrap();
            assert!((reprojected - embedded).amax() < 1e-10);
        }
    }
}
