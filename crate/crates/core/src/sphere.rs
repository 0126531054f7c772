//! The unit sphere `S^d ⊂ R^{d+1}` under the inclusion embedding.
//!
//! The nearest-point projection is `x ↦ x/‖x‖`; the origin is its only focal
//! point. Its differential at `μ` is `(I − ûûᵀ)/‖μ‖` with `û = μ/‖μ‖`.

use nalgebra::{DMatrix, DVector};

use crate::error::{EpcaError, Result};
use crate::geometry::{
    complete_orthonormal_frame, sample_covariance, tangential_component, AmbientVector, EmbeddingBackend,
    SymmetricMatrix, TangentFrame,
};

/// Ambient norms at or below this are treated as the focal point (the origin).
pub const EPS_FOCAL: f64 = 1e-12;

const UNIT_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-10;

/// A point of `S^d`, stored in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(DVector<f64>);

impl UnitVector {
    /// Wraps `v`, which must already have unit norm (to 1e-10).
    pub fn new(v: DVector<f64>) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) || (v.norm() - 1.0).abs() > UNIT_TOL {
            return Err(EpcaError::input(format!(
                "expected a unit vector, norm is {}",
                v.norm()
            )));
        }
        Ok(Self(v))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.len()
    }
}

/// Points on a common sphere `S^d`.
#[derive(Debug, Clone)]
pub struct SphereSample {
    points: Vec<UnitVector>,
}

impl SphereSample {
    pub fn new(points: Vec<UnitVector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(EpcaError::input("sphere sample needs at least one point"));
        };
        let n = first.ambient_dim();
        if n < 2 {
            return Err(EpcaError::input("sphere points need ambient dimension >= 2"));
        }
        if points.iter().any(|p| p.ambient_dim() != n) {
            return Err(EpcaError::input("sphere sample mixes dimensions"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[UnitVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Intrinsic dimension `d`.
    pub fn dim(&self) -> usize {
        self.points[0].ambient_dim() - 1
    }

    /// Arithmetic mean of the points in `R^{d+1}`.
    pub fn ambient_mean(&self) -> AmbientVector {
        let mut mean = DVector::zeros(self.dim() + 1);
        for p in &self.points {
            mean += p.as_vector();
        }
        mean / self.points.len() as f64
    }

    /// Applies `f` to every point (e.g. an orthogonal map).
    pub fn map(&self, f: impl Fn(&DVector<f64>) -> DVector<f64>) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| UnitVector::new(f(p.as_vector())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}

pub fn sphere_project(x: &AmbientVector) -> Result<UnitVector> {
    let norm = x.norm();
    if !norm.is_finite() {
        return Err(EpcaError::input("ambient point has non-finite entries"));
    }
    if norm <= EPS_FOCAL {
        return Err(EpcaError::focal(format!(
            "ambient point has norm {norm:e}; the center of the sphere has no unique projection"
        )));
    }
    Ok(UnitVector(x / norm))
}

/// Extrinsic sample mean: radial projection of the ambient average.
pub fn sphere_extrinsic_mean(sample: &SphereSample) -> Result<UnitVector> {
    sphere_project(&sample.ambient_mean()).map_err(|e| match e {
        EpcaError::FocalPoint(msg) => {
            EpcaError::focal(format!("sample mean is j-focal, extrinsic mean does not exist ({msg})"))
        }
        other => other,
    })
}

/// `d_μ P_j = (I − ûûᵀ)/‖μ‖`.
pub fn sphere_projection_differential(mu: &AmbientVector) -> Result<SymmetricMatrix> {
    let u = sphere_project(mu)?;
    let n = mu.len();
    let u = u.as_vector();
    let mut m = DMatrix::identity(n, n);
    m.ger(-1.0, u, u, 1.0);
    SymmetricMatrix::new(m / mu.norm())
}

/// Sample extrinsic covariance in the coordinates of `frame`:
/// `A S_n Aᵀ` with `A_{ab} = d_{x̄}P_j(e_b) · f_a`.
pub fn sphere_extrinsic_covariance(
    sample: &SphereSample,
    mean: &UnitVector,
    frame: &TangentFrame,
) -> Result<SymmetricMatrix> {
    let n = sample.dim() + 1;
    if mean.ambient_dim() != n || frame.ambient_dim() != n {
        return Err(EpcaError::input("mean, frame and sample dimensions disagree"));
    }
    if frame.vectors().tr_mul(mean.as_vector()).amax() > 1e-9 {
        return Err(EpcaError::input("frame is not tangent at the given mean"));
    }
    let ambient: Vec<AmbientVector> = sample.points().iter().map(|p| p.as_vector().clone()).collect();
    let (ambient_mean, s_n) = sample_covariance(&ambient)?;
    let dp = sphere_projection_differential(&ambient_mean)?;
    let a = frame.vectors().transpose() * dp.as_matrix();
    SymmetricMatrix::new(&a * s_n.as_matrix() * a.transpose())
}

fn check_tangent_direction(mean: &UnitVector, direction: &DVector<f64>) -> Result<()> {
    if direction.len() != mean.ambient_dim() {
        return Err(EpcaError::input("direction and mean dimensions differ"));
    }
    if (direction.norm() - 1.0).abs() > UNIT_TOL {
        return Err(EpcaError::input("principal direction must have unit norm"));
    }
    let dot = direction.dot(mean.as_vector());
    if dot.abs() > ORTHO_TOL {
        return Err(EpcaError::input(format!(
            "principal direction is not tangent at the mean (dot product {dot:e})"
        )));
    }
    Ok(())
}

/// Great circle through `mean` along `direction`: `cos(t)·mean + sin(t)·direction`.
pub fn sphere_pc_curve(mean: &UnitVector, direction: &DVector<f64>, t: f64) -> Result<UnitVector> {
    check_tangent_direction(mean, direction)?;
    let p = mean.as_vector() * t.cos() + direction * t.sin();
    // renormalize to absorb rounding
    let norm = p.norm();
    Ok(UnitVector(p / norm))
}

/// Projects `x` onto the principal great circle spanned by `mean` and
/// `pc_direction`: keep only the tangential score along `pc_direction`,
/// step that far from `mean` in the tangent plane, then project radially.
pub fn sphere_project_to_pc(
    x: &UnitVector,
    mean: &UnitVector,
    frame: &TangentFrame,
    pc_direction: &DVector<f64>,
) -> Result<UnitVector> {
    check_tangent_direction(mean, pc_direction)?;
    let u = tangential_component(&(x.as_vector() - mean.as_vector()), frame)?;
    let dir_coords = tangential_component(pc_direction, frame)?;
    let s = u.dot(&dir_coords);
    sphere_restricted_point(mean, pc_direction, s)
}

/// `P_j(mean + s·direction)`, the point of the principal circle with tangent score `s`.
pub(crate) fn sphere_restricted_point(mean: &UnitVector, direction: &DVector<f64>, s: f64) -> Result<UnitVector> {
    sphere_project(&(mean.as_vector() + direction * s))
}

/// `S^d` with the inclusion embedding into `R^{d+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sphere {
    dim: usize,
}

impl Sphere {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(EpcaError::input("sphere dimension must be at least 1"));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, x: &AmbientVector) -> Result<()> {
        if x.len() != self.dim + 1 {
            return Err(EpcaError::input(format!(
                "expected a vector in R^{}, got length {}",
                self.dim + 1,
                x.len()
            )));
        }
        Ok(())
    }
}

impl EmbeddingBackend for Sphere {
    type Point = UnitVector;

    fn ambient_dim(&self) -> usize {
        self.dim + 1
    }

    fn manifold_dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, p: &UnitVector) -> Result<AmbientVector> {
        self.check(p.as_vector())?;
        Ok(p.as_vector().clone())
    }

    fn project(&self, x: &AmbientVector) -> Result<AmbientVector> {
        self.check(x)?;
        sphere_project(x).map(UnitVector::into_inner)
    }

    fn projection_differential(&self, x: &AmbientVector) -> Result<DMatrix<f64>> {
        self.check(x)?;
        sphere_projection_differential(x).map(SymmetricMatrix::into_inner)
    }

    fn tangent_frame(&self, x: &AmbientVector) -> Result<TangentFrame> {
        let base = self.project(x)?;
        let vectors = complete_orthonormal_frame(&base)?;
        TangentFrame::new(base, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn v(c: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(c)
    }

    fn unit(c: &[f64]) -> UnitVector {
        UnitVector::new(v(c).normalize()).unwrap()
    }

    #[test]
    fn projection_examples() {
        assert_eq!(
            sphere_project(&v(&[0.0, 0.0, 2.0])).unwrap().as_vector(),
            &v(&[0.0, 0.0, 1.0])
        );
        let p = sphere_project(&v(&[3.0, 4.0, 0.0])).unwrap();
        assert!((p.as_vector() - v(&[0.6, 0.8, 0.0])).amax() < 1e-15);
        assert!(matches!(
            sphere_project(&v(&[0.0, 0.0, 0.0])),
            Err(EpcaError::FocalPoint(_))
        ));
    }

    #[test]
    fn projection_is_idempotent() {
        let p = sphere_project(&v(&[0.3, -2.0, 1.1])).unwrap();
        let q = sphere_project(p.as_vector()).unwrap();
        assert!((p.as_vector() - q.as_vector()).amax() < 1e-12);
    }

    #[test]
    fn mean_examples() {
        let single = SphereSample::new(vec![unit(&[1.0, 2.0, 3.0])]).unwrap();
        assert!((sphere_extrinsic_mean(&single).unwrap().as_vector() - single.points()[0].as_vector()).amax() < 1e-15);

        let antipodal = SphereSample::new(vec![unit(&[1.0, 0.0, 0.0]), unit(&[-1.0, 0.0, 0.0])]).unwrap();
        assert!(matches!(
            sphere_extrinsic_mean(&antipodal),
            Err(EpcaError::FocalPoint(_))
        ));

        let pair = SphereSample::new(vec![unit(&[1.0, 0.0, 0.0]), unit(&[0.0, 1.0, 0.0])]).unwrap();
        let m = sphere_extrinsic_mean(&pair).unwrap();
        assert!((m.as_vector() - v(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])).amax() < 1e-15);
    }

    #[test]
    fn differential_examples() {
        let e3 = v(&[0.0, 0.0, 1.0]);
        let mut expected = DMatrix::identity(3, 3);
        expected[(2, 2)] = 0.0;
        let d1 = sphere_projection_differential(&e3).unwrap();
        assert!((d1.as_matrix() - &expected).amax() < 1e-15);
        let d2 = sphere_projection_differential(&(e3 * 2.0)).unwrap();
        assert!((d2.as_matrix() - expected * 0.5).amax() < 1e-15);
        assert!(matches!(
            sphere_projection_differential(&v(&[0.0, 0.0, 0.0])),
            Err(EpcaError::FocalPoint(_))
        ));
    }

    #[test]
    fn differential_annihilates_radial_direction() {
        let mu = v(&[0.4, -0.2, 0.7]);
        let d = sphere_projection_differential(&mu).unwrap();
        assert!((d.as_matrix() * &mu).amax() < 1e-12);
    }

    #[test]
    fn identical_points_have_zero_covariance() {
        let p = unit(&[0.2, 0.5, 0.9]);
        let sample = SphereSample::new(vec![p.clone(); 5]).unwrap();
        let mean = sphere_extrinsic_mean(&sample).unwrap();
        let frame = Sphere::new(2).unwrap().tangent_frame(mean.as_vector()).unwrap();
        let cov = sphere_extrinsic_covariance(&sample, &mean, &frame).unwrap();
        assert!(cov.as_matrix().amax() < 1e-15);
    }

    #[test]
    fn pc_curve_examples() {
        let mean = unit(&[0.0, 0.0, 1.0]);
        let dir = v(&[1.0, 0.0, 0.0]);
        assert_eq!(sphere_pc_curve(&mean, &dir, 0.0).unwrap(), mean);
        let q = sphere_pc_curve(&mean, &dir, FRAC_PI_2).unwrap();
        assert!((q.as_vector() - &dir).amax() < 1e-15);
        for i in -20..=20 {
            let p = sphere_pc_curve(&mean, &dir, i as f64 * 0.37).unwrap();
            assert!((p.as_vector().norm() - 1.0).abs() < 1e-12);
        }
        let skew = v(&[1.0, 0.0, 1.0]).normalize();
        assert!(matches!(sphere_pc_curve(&mean, &skew, 0.3), Err(EpcaError::Input(_))));
    }

    #[test]
    fn project_to_pc_examples() {
        let mean = unit(&[0.1, 0.3, 0.9]);
        let sphere = Sphere::new(2).unwrap();
        let frame = sphere.tangent_frame(mean.as_vector()).unwrap();
        let dir = frame.vectors().column(0).into_owned();
        let other = frame.vectors().column(1).into_owned();

        let same = sphere_project_to_pc(&mean, &mean, &frame, &dir).unwrap();
        assert!((same.as_vector() - mean.as_vector()).amax() < 1e-15);

        // tangent part along the direction: lands on the circle at arctan(s)
        let theta: f64 = 0.4;
        let x = sphere_pc_curve(&mean, &dir, theta).unwrap();
        let s = theta.sin();
        let projected = sphere_project_to_pc(&x, &mean, &frame, &dir).unwrap();
        let on_curve = sphere_pc_curve(&mean, &dir, s.atan()).unwrap();
        assert!((projected.as_vector() - on_curve.as_vector()).amax() < 1e-9);

        // tangent part orthogonal to the direction: back to the mean
        let y = sphere_pc_curve(&mean, &other, 0.7).unwrap();
        let back = sphere_project_to_pc(&y, &mean, &frame, &dir).unwrap();
        assert!((back.as_vector() - mean.as_vector()).amax() < 1e-12);
    }

    #[test]
    fn backend_contract() {
        let sphere = Sphere::new(3).unwrap();
        let p = unit(&[0.5, -0.5, 0.5, 0.5]);
        let e = sphere.embed(&p).unwrap();
        assert!((sphere.project(&e).unwrap() - &e).amax() < 1e-12);
        assert!(sphere.is_focal(&DVector::zeros(4)));
        let frame = sphere.tangent_frame(&(e.clone() * 3.0)).unwrap();
        assert_eq!(frame.dim(), 3);
        assert!(frame.vectors().tr_mul(&e).amax() < 1e-10);
        assert!(matches!(sphere.embed(&unit(&[1.0, 0.0])), Err(EpcaError::Input(_))));
    }
}
