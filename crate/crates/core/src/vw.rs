//! Veronese–Whitney embedding of projective spaces.
//!
//! `CP^{N-1}` is embedded into the Hermitian `N x N` matrices by
//! `[z] ↦ zz*/‖z‖²`, and `RP^{N-1}` into the real symmetric matrices by the
//! same formula. The nearest-point projection of a matrix `D` is `mm*`, where
//! `m` is a unit eigenvector of the largest eigenvalue of `D`; it is defined
//! only when that eigenvalue is simple.
//!
//! Matrices are flattened with an orthonormal basis for the Hilbert–Schmidt
//! inner product `⟨A, B⟩ = Re tr(AB*)`: the diagonal entries, followed by
//! `√2·Re A_ab` and (complex case) `√2·Im A_ab` for every `a < b` in
//! row-major order.
//!
//! Around a nonfocal `D = Σ η_a m_a m_a*` (eigenvalues increasing, top
//! eigenvector `m = m_N`) the differential of the projection is
//!
//! ```text
//! d_D P(Y) = Σ_{a<N} (η_N − η_a)⁻¹ [ (m_a* Y m) m_a m* + (m* Y m_a) m m_a* ]
//! ```
//!
//! so in the unit frame `e = (w m* + m w*)/√2`, `w ∈ {m_a, i·m_a}`, the sample
//! extrinsic covariance has the closed form used by [`vw_extrinsic_covariance`].

use std::f64::consts::SQRT_2;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{EpcaError, Result};
use crate::geometry::{AmbientVector, EmbeddingBackend, SymmetricMatrix, TangentFrame};

pub type C64 = Complex<f64>;

/// Minimum gap between the two largest eigenvalues for the projection to be
/// considered well defined.
pub const EPS_GAP: f64 = 1e-9;

/// Largest entry modulus of a complex matrix or vector.
pub fn max_modulus<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<C64, R, C>>(
    m: &nalgebra::Matrix<C64, R, C, S>,
) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖zz* − ww*‖_HS = √(2(1 − |⟨z, w⟩|²))` for unit vectors, evaluated as
/// `√2·‖w − z⟨z, w⟩‖` so that nearby points keep full relative precision.
pub fn unit_chord_distance(z: &DVector<C64>, w: &DVector<C64>) -> f64 {
    let residual = w - z * z.dotc(w);
    SQRT_2 * residual.norm()
}

/// `z z*`
pub fn outer(z: &DVector<C64>) -> DMatrix<C64> {
    z * z.adjoint()
}

/// Flattens a Hermitian matrix into `R^{N²}` (orthonormal Hilbert–Schmidt coordinates).
pub fn hermitian_to_vec(h: &DMatrix<C64>) -> DVector<f64> {
    let n = h.nrows();
    let mut v = Vec::with_capacity(n * n);
    for a in 0..n {
        v.push(h[(a, a)].re);
    }
    for a in 0..n {
        for b in a + 1..n {
            v.push(SQRT_2 * h[(a, b)].re);
            v.push(SQRT_2 * h[(a, b)].im);
        }
    }
    DVector::from_vec(v)
}

/// Inverse of [`hermitian_to_vec`].
pub fn vec_to_hermitian(v: &DVector<f64>, n: usize) -> Result<DMatrix<C64>> {
    if v.len() != n * n {
        return Err(EpcaError::input(format!(
            "expected {} coordinates for a {n}x{n} Hermitian matrix, got {}",
            n * n,
            v.len()
        )));
    }
    let mut h = DMatrix::zeros(n, n);
    for a in 0..n {
        h[(a, a)] = C64::new(v[a], 0.0);
    }
    let mut idx = n;
    for a in 0..n {
        for b in a + 1..n {
            let z = C64::new(v[idx], v[idx + 1]) / SQRT_2;
            h[(a, b)] = z;
            h[(b, a)] = z.conj();
            idx += 2;
        }
    }
    Ok(h)
}

/// Flattens a real symmetric matrix into `R^{N(N+1)/2}`.
pub fn symmetric_to_vec(s: &DMatrix<f64>) -> DVector<f64> {
    let n = s.nrows();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for a in 0..n {
        v.push(s[(a, a)]);
    }
    for a in 0..n {
        for b in a + 1..n {
            v.push(SQRT_2 * s[(a, b)]);
        }
    }
    DVector::from_vec(v)
}

/// Inverse of [`symmetric_to_vec`].
pub fn vec_to_symmetric(v: &DVector<f64>, n: usize) -> Result<DMatrix<f64>> {
    if v.len() != n * (n + 1) / 2 {
        return Err(EpcaError::input(format!(
            "expected {} coordinates for a {n}x{n} symmetric matrix, got {}",
            n * (n + 1) / 2,
            v.len()
        )));
    }
    let mut s = DMatrix::zeros(n, n);
    for a in 0..n {
        s[(a, a)] = v[a];
    }
    let mut idx = n;
    for a in 0..n {
        for b in a + 1..n {
            s[(a, b)] = v[idx] / SQRT_2;
            s[(b, a)] = v[idx] / SQRT_2;
            idx += 1;
        }
    }
    Ok(s)
}

/// Multiplies `v` by a unit scalar so that its entry of largest modulus
/// (first one on ties) is real and positive.
pub fn normalize_phase(v: &mut DVector<C64>) -> C64 {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    let Some(&pivot) = v.get(best) else {
        return C64::new(1.0, 0.0);
    };
    if pivot.norm() == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let phase = pivot.conj() / pivot.norm();
    *v *= phase;
    v[best] = C64::new(v[best].norm(), 0.0);
    phase
}

/// Eigenvalues (increasing) and phase-normalized unit eigenvectors (columns)
/// of a Hermitian matrix.
pub fn hermitian_eigen(h: &DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<C64>)> {
    let n = h.nrows();
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(EpcaError::input("Hermitian matrix has non-finite entries"));
    }
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| EpcaError::input("Hermitian eigensolver did not converge"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = eig.eigenvalues[src];
        let mut v = eig.eigenvectors.column(src).into_owned();
        normalize_phase(&mut v);
        vectors.set_column(dst, &v);
    }
    Ok((values, vectors))
}

fn real_eigen(s: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let sym = SymmetricMatrix::new(s.clone())?;
    let d = crate::geometry::spectral_decompose(&sym)?;
    let n = d.eigenvalues.len();
    // reverse to increasing order
    let values = DVector::from_iterator(n, d.eigenvalues.iter().rev().copied());
    let mut vectors = DMatrix::zeros(n, n);
    for i in 0..n {
        vectors.set_column(i, &d.eigenvectors.column(n - 1 - i));
    }
    Ok((values, vectors))
}

fn check_gap(values: &DVector<f64>, eps_gap: f64) -> Result<()> {
    let n = values.len();
    if n >= 2 {
        let gap = values[n - 1] - values[n - 2];
        if gap <= eps_gap {
            return Err(EpcaError::focal(format!(
                "largest eigenvalue {} is not simple (gap {gap:e} <= {eps_gap:e}); the Veronese-Whitney mean is not unique",
                values[n - 1]
            )));
        }
    }
    Ok(())
}

/// Spectral data of an averaged VW matrix: everything needed for the mean,
/// the adapted frame and the closed-form covariance on `CP^{N-1}`.
#[derive(Debug, Clone)]
pub struct VwFit {
    /// Eigenvalues of the averaged matrix, increasing.
    pub eigenvalues: DVector<f64>,
    /// Matching unit eigenvectors (columns).
    pub eigenvectors: DMatrix<C64>,
    /// Top eigenvector: a representative of the VW mean.
    pub mean: DVector<C64>,
    /// Tangent directions `m_a, i·m_a` for the non-top eigenvectors,
    /// largest eigenvalue first.
    pub directions: Vec<DVector<C64>>,
    /// `η_N − η_a` for each entry of `directions`.
    pub gaps: Vec<f64>,
}

impl VwFit {
    /// Fit from an arbitrary Hermitian matrix (typically a sample average).
    pub fn from_matrix(k: &DMatrix<C64>, eps_gap: f64) -> Result<Self> {
        let (values, vectors) = hermitian_eigen(k)?;
        check_gap(&values, eps_gap)?;
        let n = values.len();
        let mean = vectors.column(n - 1).into_owned();
        let mut directions = Vec::with_capacity(2 * n.saturating_sub(1));
        let mut gaps = Vec::with_capacity(directions.capacity());
        for a in (0..n - 1).rev() {
            let m_a = vectors.column(a).into_owned();
            let gap = values[n - 1] - values[a];
            directions.push(m_a.clone());
            directions.push(m_a * C64::new(0.0, 1.0));
            gaps.push(gap);
            gaps.push(gap);
        }
        Ok(Self {
            eigenvalues: values,
            eigenvectors: vectors,
            mean,
            directions,
            gaps,
        })
    }

    /// Replaces the mean representative by `phase · mean` (same shape class).
    pub fn with_mean_phase(mut self, phase: C64) -> Self {
        self.mean *= phase;
        self
    }

    pub fn ambient_size(&self) -> usize {
        self.mean.len()
    }

    /// Top eigenvalue minus the runner-up.
    pub fn spectral_gap(&self) -> f64 {
        let n = self.eigenvalues.len();
        if n < 2 {
            f64::INFINITY
        } else {
            self.eigenvalues[n - 1] - self.eigenvalues[n - 2]
        }
    }

    /// Unit Hermitian tangent vector `(w m* + m w*)/√2` for a direction `w ⟂ m`.
    pub fn frame_matrix(&self, w: &DVector<C64>) -> DMatrix<C64> {
        let wm = w * self.mean.adjoint();
        (&wm + wm.adjoint()) * C64::new(1.0 / SQRT_2, 0.0)
    }

    /// The adapted frame flattened into `R^{N²}`.
    pub fn tangent_frame(&self) -> Result<TangentFrame> {
        let base = hermitian_to_vec(&outer(&self.mean));
        let mut vectors = DMatrix::zeros(base.len(), self.directions.len());
        for (i, w) in self.directions.iter().enumerate() {
            vectors.set_column(i, &hermitian_to_vec(&self.frame_matrix(w)));
        }
        TangentFrame::new(base, vectors)
    }
}

fn unit_sample(sample: &[DVector<C64>]) -> Result<Vec<DVector<C64>>> {
    let Some(first) = sample.first() else {
        return Err(EpcaError::input("empty sample"));
    };
    let n = first.len();
    if n == 0 {
        return Err(EpcaError::input("points must have at least one coordinate"));
    }
    sample
        .iter()
        .map(|z| {
            if z.len() != n {
                return Err(EpcaError::input("sample points have inconsistent dimensions"));
            }
            let norm = z.norm();
            if !norm.is_finite() || norm == 0.0 {
                return Err(EpcaError::input("projective points must be finite and nonzero"));
            }
            Ok(z / C64::new(norm, 0.0))
        })
        .collect()
}

/// `n⁻¹ Σ X_i X_i* / ‖X_i‖²`
pub fn vw_average(sample: &[DVector<C64>]) -> Result<DMatrix<C64>> {
    let unit = unit_sample(sample)?;
    let dim = unit[0].len();
    let mut k = DMatrix::zeros(dim, dim);
    for z in &unit {
        k += outer(z);
    }
    Ok(k / C64::new(unit.len() as f64, 0.0))
}

/// VW mean and spectral data of a sample on `CP^{N-1}`.
pub fn vw_fit(sample: &[DVector<C64>]) -> Result<VwFit> {
    VwFit::from_matrix(&vw_average(sample)?, EPS_GAP)
}

/// Products `(m_a* X)(X* m)` for every sample (rows) and eigenvector `a`
/// in the order of `fit.directions` (one column per eigenvector).
fn mixed_products(fit: &VwFit, sample: &[DVector<C64>]) -> Result<DMatrix<C64>> {
    let unit = unit_sample(sample)?;
    if unit[0].len() != fit.ambient_size() {
        return Err(EpcaError::input("sample dimension does not match the fit"));
    }
    let pairs = fit.directions.len() / 2;
    let mut out = DMatrix::zeros(unit.len(), pairs);
    for (i, x) in unit.iter().enumerate() {
        let d = x.dotc(&fit.mean).conj(); // m* x
        let d_conj = d.conj(); // x* m
        for p in 0..pairs {
            let c = fit.directions[2 * p].dotc(x); // m_a* x
            out[(i, p)] = c * d_conj;
        }
    }
    Ok(out)
}

/// Tangential components of `j(X_i) − j(mean)` in the frame of `fit`
/// (one row per sample).
pub fn vw_tangent_scores(fit: &VwFit, sample: &[DVector<C64>]) -> Result<DMatrix<f64>> {
    let prod = mixed_products(fit, sample)?;
    let mut scores = DMatrix::zeros(prod.nrows(), 2 * prod.ncols());
    for i in 0..prod.nrows() {
        for p in 0..prod.ncols() {
            scores[(i, 2 * p)] = SQRT_2 * prod[(i, p)].re;
            scores[(i, 2 * p + 1)] = SQRT_2 * prod[(i, p)].im;
        }
    }
    Ok(scores)
}

fn covariance_from_scores(fit: &VwFit, scores: &DMatrix<f64>, flip_first_gap: bool) -> Result<SymmetricMatrix> {
    let n = scores.nrows() as f64;
    let mut xi = scores.clone();
    for (col, gap) in fit.gaps.iter().enumerate() {
        let mut factor = 1.0 / gap;
        if flip_first_gap && col == 0 {
            factor = -factor;
        }
        xi.column_mut(col).scale_mut(factor);
    }
    let cov = xi.tr_mul(&xi) / n;
    if flip_first_gap {
        // the canary must survive symmetrization: only flip the first row
        let mut c = cov.clone();
        for b in 1..c.ncols() {
            c[(b, 0)] = -c[(b, 0)];
        }
        return SymmetricMatrix::new(c);
    }
    SymmetricMatrix::new(cov)
}

/// Closed-form sample extrinsic covariance on `CP^{N-1}` in the frame of `fit`:
///
/// ```text
/// S_{αβ} = n⁻¹ (η_N − η_a)⁻¹ (η_N − η_b)⁻¹ Σ_i ξ_{iα} ξ_{iβ},
/// ξ_{iα} = √2·Re / √2·Im of (m_a* X_i)(X_i* m)
/// ```
///
/// for the real and imaginary frame directions of each eigenvector `m_a`.
pub fn vw_extrinsic_covariance(fit: &VwFit, sample: &[DVector<C64>]) -> Result<SymmetricMatrix> {
    covariance_from_scores(fit, &vw_tangent_scores(fit, sample)?, false)
}

#[doc(hidden)]
/// Deliberately broken variant used to check that the verification suite
/// notices a sign error in the closed form.
pub fn vw_extrinsic_covariance_mutated(fit: &VwFit, sample: &[DVector<C64>]) -> Result<SymmetricMatrix> {
    covariance_from_scores(fit, &vw_tangent_scores(fit, sample)?, true)
}

/// Closed-form `d_D P` on Hermitian matrices, as a matrix on `R^{N²}`.
pub fn vw_projection_differential(fit: &VwFit) -> DMatrix<f64> {
    let n = fit.ambient_size();
    let dim = n * n;
    let mut out = DMatrix::zeros(dim, dim);
    let pairs = fit.directions.len() / 2;
    for b in 0..dim {
        let mut e = DVector::zeros(dim);
        e[b] = 1.0;
        let y = vec_to_hermitian(&e, n).expect("dimension checked");
        let ym = &y * &fit.mean;
        let mut d = DMatrix::zeros(n, n);
        for p in 0..pairs {
            let m_a = &fit.directions[2 * p];
            let coef = m_a.dotc(&ym) / fit.gaps[2 * p];
            let term = m_a * fit.mean.adjoint() * coef;
            d += &term + term.adjoint();
        }
        out.set_column(b, &hermitian_to_vec(&d));
    }
    out
}

/// `CP^{N-1}` (points are nonzero vectors of `C^N`) with the VW embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexProjective {
    n: usize,
}

impl ComplexProjective {
    /// Projective space of lines in `C^n`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(EpcaError::input("complex projective space needs n >= 2"));
        }
        Ok(Self { n })
    }

    fn fit_at(&self, x: &AmbientVector) -> Result<VwFit> {
        VwFit::from_matrix(&vec_to_hermitian(x, self.n)?, EPS_GAP)
    }
}

impl EmbeddingBackend for ComplexProjective {
    type Point = DVector<C64>;

    fn ambient_dim(&self) -> usize {
        self.n * self.n
    }

    fn manifold_dim(&self) -> usize {
        2 * (self.n - 1)
    }

    fn embed(&self, p: &DVector<C64>) -> Result<AmbientVector> {
        if p.len() != self.n {
            return Err(EpcaError::input(format!(
                "expected a vector of C^{}, got length {}",
                self.n,
                p.len()
            )));
        }
        let unit = unit_sample(std::slice::from_ref(p))?;
        Ok(hermitian_to_vec(&outer(&unit[0])))
    }

    fn project(&self, x: &AmbientVector) -> Result<AmbientVector> {
        Ok(hermitian_to_vec(&outer(&self.fit_at(x)?.mean)))
    }

    fn projection_differential(&self, x: &AmbientVector) -> Result<DMatrix<f64>> {
        Ok(vw_projection_differential(&self.fit_at(x)?))
    }

    fn tangent_frame(&self, x: &AmbientVector) -> Result<TangentFrame> {
        self.fit_at(x)?.tangent_frame()
    }

    fn chord_distance(&self, p: &DVector<C64>, q: &DVector<C64>) -> Result<f64> {
        let u = unit_sample(&[p.clone(), q.clone()])?;
        Ok(unit_chord_distance(&u[0], &u[1]))
    }
}

/// Spectral data of an averaged VW matrix on `RP^{N-1}`.
#[derive(Debug, Clone)]
pub struct RpFit {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub mean: DVector<f64>,
    /// Non-top eigenvectors, largest eigenvalue first.
    pub directions: Vec<DVector<f64>>,
    pub gaps: Vec<f64>,
}

impl RpFit {
    pub fn from_matrix(k: &DMatrix<f64>, eps_gap: f64) -> Result<Self> {
        let (values, vectors) = real_eigen(k)?;
        check_gap(&values, eps_gap)?;
        let n = values.len();
        let mean = vectors.column(n - 1).into_owned();
        let mut directions = Vec::with_capacity(n - 1);
        let mut gaps = Vec::with_capacity(n - 1);
        for a in (0..n - 1).rev() {
            directions.push(vectors.column(a).into_owned());
            gaps.push(values[n - 1] - values[a]);
        }
        Ok(Self {
            eigenvalues: values,
            eigenvectors: vectors,
            mean,
            directions,
            gaps,
        })
    }

    /// The adapted frame `(m_a mᵀ + m m_aᵀ)/√2` flattened into `R^{N(N+1)/2}`.
    pub fn tangent_frame(&self) -> Result<TangentFrame> {
        let base = symmetric_to_vec(&(&self.mean * self.mean.transpose()));
        let mut vectors = DMatrix::zeros(base.len(), self.directions.len());
        for (i, w) in self.directions.iter().enumerate() {
            let wm = w * self.mean.transpose();
            let e = (&wm + wm.transpose()) / SQRT_2;
            vectors.set_column(i, &symmetric_to_vec(&e));
        }
        TangentFrame::new(base, vectors)
    }
}

fn unit_real_sample(sample: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    let Some(first) = sample.first() else {
        return Err(EpcaError::input("empty sample"));
    };
    let n = first.len();
    sample
        .iter()
        .map(|x| {
            if x.len() != n {
                return Err(EpcaError::input("sample points have inconsistent dimensions"));
            }
            let norm = x.norm();
            if !norm.is_finite() || norm == 0.0 {
                return Err(EpcaError::input("projective points must be finite and nonzero"));
            }
            Ok(x / norm)
        })
        .collect()
}

/// Mean VW matrix `K = n⁻¹ Σ X_i X_iᵀ` and its spectral fit on `RP^{N-1}`.
pub fn rp_fit(sample: &[DVector<f64>]) -> Result<RpFit> {
    let unit = unit_real_sample(sample)?;
    let n = unit[0].len();
    let mut k = DMatrix::zeros(n, n);
    for x in &unit {
        k.ger(1.0, x, x, 1.0);
    }
    RpFit::from_matrix(&(k / unit.len() as f64), EPS_GAP)
}

/// The sample covariance formula exactly as usually printed for `RP^{N-1}`:
///
/// ```text
/// S_ab = n⁻¹ (η_N − η_a)⁻¹ (η_N − η_b)⁻¹ Σ_i (m_a·X_i)(m_b·X_i)(m·X_i)²
/// ```
///
/// Its coordinates are taken against `m_a mᵀ + m m_aᵀ`, which has
/// Hilbert–Schmidt norm `√2`; it is therefore half of
/// [`rp_extrinsic_covariance`], which uses unit frame vectors.
pub fn prentice_covariance(fit: &RpFit, sample: &[DVector<f64>]) -> Result<SymmetricMatrix> {
    let unit = unit_real_sample(sample)?;
    let m = fit.directions.len();
    let mut s = DMatrix::zeros(m, m);
    for x in &unit {
        let proj: Vec<f64> = fit.directions.iter().map(|d| d.dot(x)).collect();
        let top = fit.mean.dot(x);
        for a in 0..m {
            for b in 0..m {
                s[(a, b)] += proj[a] * proj[b] * top * top;
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            s[(a, b)] /= unit.len() as f64 * fit.gaps[a] * fit.gaps[b];
        }
    }
    SymmetricMatrix::new(s)
}

/// Sample extrinsic covariance on `RP^{N-1}` in the unit frame of [`RpFit::tangent_frame`].
pub fn rp_extrinsic_covariance(fit: &RpFit, sample: &[DVector<f64>]) -> Result<SymmetricMatrix> {
    let printed = prentice_covariance(fit, sample)?;
    SymmetricMatrix::new(printed.into_inner() * 2.0)
}

/// `RP^{N-1}` (points are nonzero vectors of `R^N`) with the VW embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealProjective {
    n: usize,
}

impl RealProjective {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(EpcaError::input("real projective space needs n >= 2"));
        }
        Ok(Self { n })
    }

    fn fit_at(&self, x: &AmbientVector) -> Result<RpFit> {
        RpFit::from_matrix(&vec_to_symmetric(x, self.n)?, EPS_GAP)
    }
}

impl EmbeddingBackend for RealProjective {
    type Point = DVector<f64>;

    fn ambient_dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn manifold_dim(&self) -> usize {
        self.n - 1
    }

    fn embed(&self, p: &DVector<f64>) -> Result<AmbientVector> {
        if p.len() != self.n {
            return Err(EpcaError::input(format!(
                "expected a vector of R^{}, got length {}",
                self.n,
                p.len()
            )));
        }
        let x = &unit_real_sample(std::slice::from_ref(p))?[0];
        Ok(symmetric_to_vec(&(x * x.transpose())))
    }

    fn project(&self, x: &AmbientVector) -> Result<AmbientVector> {
        let m = self.fit_at(x)?.mean;
        Ok(symmetric_to_vec(&(&m * m.transpose())))
    }

    fn projection_differential(&self, x: &AmbientVector) -> Result<DMatrix<f64>> {
        let fit = self.fit_at(x)?;
        let n = self.n;
        let dim = self.ambient_dim();
        let mut out = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let mut e = DVector::zeros(dim);
            e[b] = 1.0;
            let y = vec_to_symmetric(&e, n)?;
            let ym = &y * &fit.mean;
            let mut d = DMatrix::zeros(n, n);
            for (m_a, gap) in fit.directions.iter().zip(&fit.gaps) {
                let term = m_a * fit.mean.transpose() * (m_a.dot(&ym) / gap);
                d += &term + term.transpose();
            }
            out.set_column(b, &symmetric_to_vec(&d));
        }
        Ok(out)
    }

    fn tangent_frame(&self, x: &AmbientVector) -> Result<TangentFrame> {
        self.fit_at(x)?.tangent_frame()
    }
}
