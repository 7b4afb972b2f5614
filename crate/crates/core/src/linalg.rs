//! Dense complex Hermitian matrix engine.
//!
//! Spectral decompositions, functional calculus, pseudo-functions on singular
//! operators, support and intersection projections, and the Löwner / chaotic
//! order predicates. Everything here is immutable after construction.
//!
//! Positive semidefinite matrices cache their eigensystem. Eigenvalues in
//! `[-clip_tol, 0)` are clipped to zero, and eigenvalues at or below
//! `rank_tol` are stored as exact zeros, so every pseudo-function (`log`,
//! negative powers) acts on the support only.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::defaults;
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Tolerances used when validating and decomposing matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub recon: f64,
    pub rank_rel: f64,
    pub clip_rel: f64,
    pub group_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: defaults::HERM_TOL,
            recon: defaults::RECON_TOL,
            rank_rel: defaults::RANK_REL,
            clip_rel: defaults::CLIP_REL,
            group_rel: defaults::GROUP_REL,
        }
    }
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// `U M U^dagger`.
pub fn congruence(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u * m * u.adjoint()
}

/// `ln(sum_i exp(x_i))`, with `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn ensure_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(Error::DimMismatch(a, b))
    } else {
        Ok(())
    }
}

/// A Hermitian matrix; stored entries are the symmetrized `(M + M^dagger) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tol(m, defaults::HERM_TOL)
    }

    pub fn with_tol(m: ComplexMatrix, herm_tol: f64) -> Result<Self> {
        check_square(&m)?;
        let asym = max_abs(&(&m - m.adjoint()));
        if asym > herm_tol * max_abs(&m).max(1.0) {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes without checking. For matrices Hermitian by construction.
    pub(crate) fn symmetrize(m: ComplexMatrix) -> Self {
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self(h)
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let v = DVector::from_iterator(d.len(), d.iter().map(|&x| C64::new(x, 0.0)));
        Self(ComplexMatrix::from_diagonal(&v))
    }

    pub fn from_real(dim: usize, row_major: &[f64]) -> Result<Self> {
        if row_major.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                dim * dim,
                row_major.len()
            )));
        }
        Self::new(ComplexMatrix::from_row_iterator(
            dim,
            dim,
            row_major.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.0)
    }

    /// Transpose in the fixed computational basis (equal to the entrywise conjugate).
    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `U H U^dagger` for any square `U`.
    pub fn congruence(&self, u: &ComplexMatrix) -> Self {
        Self::symmetrize(congruence(u, &self.0))
    }

    /// `P H P` for a projection.
    pub fn compress(&self, p: &Projection) -> Self {
        self.congruence(p.matrix())
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, c: f64) -> HermitianMatrix {
        HermitianMatrix(&self.0 * C64::new(c, 0.0))
    }
}

/// Eigenvalues in ascending order with the matching unitary of eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(g(lambda)) U^dagger`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        self.with_values(&values)
    }

    pub fn with_values(&self, values: &[f64]) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    fn sorted(values: Vec<f64>, vectors: ComplexMatrix) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let eigenvalues = DVector::from_iterator(values.len(), order.iter().map(|&i| values[i]));
        let eigenvectors =
            ComplexMatrix::from_columns(&order.iter().map(|&i| vectors.column(i)).collect::<Vec<_>>());
        Self { eigenvalues, eigenvectors }
    }
}

pub fn eig_hermitian(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    eig_hermitian_with_tol(m, defaults::RECON_TOL)
}

pub fn eig_hermitian_with_tol(m: &HermitianMatrix, recon_tol: f64) -> Result<SpectralDecomposition> {
    let d = m.dim();
    if d == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: DVector::zeros(0),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m.matrix().clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
    let dec = SpectralDecomposition::sorted(eig.eigenvalues.iter().cloned().collect(), eig.eigenvectors);
    if dec.eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    let scale = max_abs(m.matrix()).max(1.0);
    let recon_err = max_abs(&(dec.reconstruct() - m.matrix()));
    let orth_err = max_abs(&(dec.eigenvectors.adjoint() * &dec.eigenvectors - identity(d)));
    if recon_err > recon_tol * scale || orth_err > recon_tol {
        return Err(Error::Eigen(format!(
            "reconstruction error {recon_err:.3e}, orthogonality error {orth_err:.3e}"
        )));
    }
    Ok(dec)
}

/// Cyclic Jacobi eigensolver.
///
/// Slower than [`eig_hermitian`] but keeps small eigenvalues to high relative
/// accuracy when `m = D X D` with `D` diagonal and `X` well conditioned, as
/// happens when some rows and columns carry a factor `eps^{-1/2}`.
pub fn eig_hermitian_jacobi(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = identity(n);
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 || mag <= f64::EPSILON * (a[(p, p)].re * a[(q, q)].re).abs().sqrt() {
                    continue;
                }
                rotated = true;
                // phase e^{-i phi} on column q makes the pivot real
                let phase = apq.conj() / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)] * phase);
                    a[(k, p)] = x * c - y * s;
                    a[(k, q)] = x * s + y * c;
                    let (x, y) = (v[(k, p)], v[(k, q)] * phase);
                    v[(k, p)] = x * c - y * s;
                    v[(k, q)] = x * s + y * c;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)] * phase.conj());
                    a[(p, k)] = x * c - y * s;
                    a[(q, k)] = x * s + y * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
        if !rotated {
            let dec = SpectralDecomposition::sorted((0..n).map(|i| a[(i, i)].re).collect(), v);
            if dec.eigenvalues.iter().any(|l| !l.is_finite()) {
                return Err(Error::Eigen("non-finite eigenvalue".into()));
            }
            return Ok(dec);
        }
    }
    Err(Error::Eigen("Jacobi sweeps did not converge".into()))
}

/// Functional calculus `U f(Lambda) U^dagger`.
pub fn apply_function(a: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(a)?;
    apply_on_spectrum(&eig, f)
}

pub(crate) fn apply_on_spectrum(
    eig: &SpectralDecomposition,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix> {
    let values: Vec<f64> = eig.eigenvalues.iter().map(|&l| f(l)).collect();
    if let Some(bad) = eig.eigenvalues.iter().zip(&values).find(|(_, v)| !v.is_finite()) {
        return Err(Error::Domain(format!("function undefined at eigenvalue {}", bad.0)));
    }
    Ok(HermitianMatrix::symmetrize(eig.with_values(&values)))
}

/// Matrix exponential of a Hermitian matrix.
pub fn expm_hermitian(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_function(h, f64::exp)
}

/// A positive semidefinite matrix with its cached eigensystem.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    herm: HermitianMatrix,
    eig: SpectralDecomposition,
    rank: usize,
    rank_tol: f64,
}

impl PsdMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        Self::with_tol(h, &Tolerances::default())
    }

    pub fn with_tol(h: HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        let eig = eig_hermitian_with_tol(&h, tol.recon)?;
        Self::from_parts(h, eig, tol)
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diag(d))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_diag(&vec![0.0; dim]).expect("zero matrix is PSD")
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim]).expect("identity is PSD")
    }

    /// Builds from an eigensystem known to be valid (orthonormal vectors,
    /// nonnegative values). Values are re-sorted.
    pub(crate) fn from_spectrum(values: Vec<f64>, vectors: ComplexMatrix) -> Result<Self> {
        let eig = SpectralDecomposition::sorted(values, vectors);
        let h = HermitianMatrix::symmetrize(eig.reconstruct());
        Self::from_parts(h, eig, &Tolerances::default())
    }

    fn from_parts(h: HermitianMatrix, mut eig: SpectralDecomposition, tol: &Tolerances) -> Result<Self> {
        let lmax = eig.max().max(0.0);
        let scale = lmax.max(1.0);
        let clip_tol = tol.clip_rel * scale;
        let rank_tol = tol.rank_rel * scale;
        let lmin = eig.min();
        if lmin < -clip_tol {
            return Err(Error::NotPsd(lmin));
        }
        let mut rank = 0;
        for l in eig.eigenvalues.iter_mut() {
            if *l <= rank_tol {
                *l = 0.0;
            } else {
                rank += 1;
            }
        }
        Ok(Self { herm: h, eig, rank, rank_tol })
    }

    pub fn dim(&self) -> usize {
        self.herm.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.herm.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.herm
    }

    pub fn eig(&self) -> &SpectralDecomposition {
        &self.eig
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eig.eigenvalues
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn trace(&self) -> f64 {
        self.eig.eigenvalues.sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn is_pd(&self) -> bool {
        self.rank == self.dim()
    }

    /// `U g(Lambda) U^dagger` with `g` applied on the support and 0 on the kernel.
    pub fn map_support(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.eig.map(|l| if l > 0.0 { g(l) } else { 0.0 })
    }

    /// Orthonormal basis (columns) of the support.
    pub fn support_basis(&self) -> ComplexMatrix {
        let cols: Vec<_> = (0..self.dim())
            .filter(|&j| self.eig.eigenvalues[j] > 0.0)
            .map(|j| self.eig.eigenvectors.column(j))
            .collect();
        columns_or_empty(self.dim(), &cols)
    }

    /// Orthonormal basis (columns) of the kernel.
    pub fn kernel_basis(&self) -> ComplexMatrix {
        let cols: Vec<_> = (0..self.dim())
            .filter(|&j| self.eig.eigenvalues[j] == 0.0)
            .map(|j| self.eig.eigenvectors.column(j))
            .collect();
        columns_or_empty(self.dim(), &cols)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("cannot scale a PSD matrix by {c}")));
        }
        Self::new(&self.herm * c)
    }

    pub fn transpose(&self) -> Result<Self> {
        Self::new(self.herm.transpose())
    }

    pub fn congruence(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.herm.congruence(u))
    }

    /// `A + eps I`, sharing eigenvectors with `A`.
    pub fn shifted(&self, eps: f64) -> Result<Self> {
        let values: Vec<f64> = self.eig.eigenvalues.iter().map(|l| l + eps).collect();
        Self::from_spectrum(values, self.eig.eigenvectors.clone())
    }

    pub fn to_pd(&self) -> Result<PdMatrix> {
        PdMatrix::new(self.clone())
    }
}

fn columns_or_empty(dim: usize, cols: &[nalgebra::DVectorView<'_, C64>]) -> ComplexMatrix {
    if cols.is_empty() {
        ComplexMatrix::zeros(dim, 0)
    } else {
        ComplexMatrix::from_columns(cols)
    }
}

/// A positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PdMatrix(PsdMatrix);

impl PdMatrix {
    pub fn new(a: PsdMatrix) -> Result<Self> {
        if !a.is_pd() {
            return Err(Error::NotPd(a.eig.min()));
        }
        Ok(Self(a))
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(PsdMatrix::from_matrix(m)?)
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        Self::new(PsdMatrix::from_diag(d)?)
    }

    pub fn psd(&self) -> &PsdMatrix {
        &self.0
    }

    pub fn into_psd(self) -> PsdMatrix {
        self.0
    }

    /// Ordinary matrix logarithm.
    pub fn log(&self) -> HermitianMatrix {
        hat_log(&self.0)
    }
}

impl std::ops::Deref for PdMatrix {
    type Target = PsdMatrix;
    fn deref(&self) -> &PsdMatrix {
        &self.0
    }
}

/// An orthogonal projection together with an orthonormal basis of its range.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    herm: HermitianMatrix,
    basis: ComplexMatrix,
}

impl Projection {
    /// Validates `P^2 = P` and a `{0, 1}` spectrum.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let d = h.dim();
        let idem = max_abs(&(h.matrix() * h.matrix() - h.matrix()));
        if idem > defaults::RECON_TOL {
            return Err(Error::NotProjection(format!("|P^2 - P| = {idem:.3e}")));
        }
        let eig = eig_hermitian(&h)?;
        let tol = defaults::RANK_REL.max(1e-9);
        if let Some(l) = eig.eigenvalues.iter().find(|&&l| l.abs() > tol && (l - 1.0).abs() > tol) {
            return Err(Error::NotProjection(format!("eigenvalue {l}")));
        }
        let cols: Vec<_> =
            (0..d).filter(|&j| eig.eigenvalues[j] > 0.5).map(|j| eig.eigenvectors.column(j)).collect();
        Ok(Self::from_basis(columns_or_empty(d, &cols)))
    }

    /// Projection onto the span of orthonormal columns.
    pub fn from_basis(basis: ComplexMatrix) -> Self {
        let herm = HermitianMatrix::symmetrize(&basis * basis.adjoint());
        Self { herm, basis }
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_basis(ComplexMatrix::zeros(dim, 0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_basis(identity(dim))
    }

    /// Rank-one projection `x x^dagger` for a (normalized here) vector.
    pub fn rank_one(x: &DVector<C64>) -> Self {
        let n = x.norm();
        Self::from_basis(ComplexMatrix::from_column_slice(x.len(), 1, (x / C64::new(n, 0.0)).as_slice()))
    }

    pub fn dim(&self) -> usize {
        self.herm.dim()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.herm.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.herm
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn complement(&self) -> Self {
        let d = self.dim();
        let h = HermitianMatrix::symmetrize(identity(d) - self.matrix());
        Projection::new(h).expect("complement of a projection is a projection")
    }
}

/// Extended logarithm: `log` on the support, 0 on the kernel.
pub fn hat_log(a: &PsdMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(a.map_support(f64::ln))
}

pub fn support_projection(a: &PsdMatrix) -> Projection {
    Projection::from_basis(a.support_basis())
}

/// Projection onto `ran P ∩ ran Q`: the eigenvalue-2 eigenspace of `P + Q`.
pub fn intersection_projection(p: &Projection, q: &Projection) -> Result<Projection> {
    ensure_same_dim(p.dim(), q.dim())?;
    let d = p.dim();
    if p.rank() == 0 || q.rank() == 0 {
        return Ok(Projection::zero(d));
    }
    let sum = p.hermitian() + q.hermitian();
    let eig = eig_hermitian(&sum)?;
    let threshold = 2.0 - defaults::RANK_REL * 2.0;
    let cols: Vec<_> =
        (0..d).filter(|&j| eig.eigenvalues[j] > threshold).map(|j| eig.eigenvectors.column(j)).collect();
    Ok(Projection::from_basis(columns_or_empty(d, &cols)))
}

/// `A^p` on the support and 0 on the kernel (Moore-Penrose convention for `p < 0`).
pub fn pseudo_power(a: &PsdMatrix, p: f64) -> Result<PsdMatrix> {
    let values: Vec<f64> = a.eig.eigenvalues.iter().map(|&l| if l > 0.0 { l.powf(p) } else { 0.0 }).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("power {p} overflows")));
    }
    PsdMatrix::from_spectrum(values, a.eig.eigenvectors.clone())
}

/// `A <= B`: the smallest eigenvalue of `B - A` is at least `-tol`.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<bool> {
    ensure_same_dim(a.dim(), b.dim())?;
    let eig = eig_hermitian(&(b - a))?;
    Ok(eig.min() >= -tol)
}

/// Chaotic order `A << B` iff `log A <= log B`.
pub fn chaotic_leq(a: &PdMatrix, b: &PdMatrix, tol: f64) -> Result<bool> {
    loewner_leq(&a.log(), &b.log(), tol)
}

/// `P exp(P M P) P`, computed by exponentiating `M` inside `ran P`.
///
/// Returns the matrix together with `ln tr(...)` (which is `-inf` when `P = 0`).
pub fn compressed_exp(p: &Projection, m: &HermitianMatrix) -> Result<(ComplexMatrix, f64)> {
    ensure_same_dim(p.dim(), m.dim())?;
    let w = p.basis();
    if w.ncols() == 0 {
        return Ok((ComplexMatrix::zeros(p.dim(), p.dim()), f64::NEG_INFINITY));
    }
    let inner = HermitianMatrix::symmetrize(w.adjoint() * m.matrix() * w);
    let eig = eig_hermitian(&inner)?;
    let values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    let log_trace = log_sum_exp(&values);
    let exp_inner = eig.map(f64::exp);
    Ok((w * exp_inner * w.adjoint(), log_trace))
}

/// Sum of squared moduli `|u_i^dagger v_j|^2` arranged as an `n x m` real matrix.
pub(crate) fn overlap_matrix(u: &ComplexMatrix, v: &ComplexMatrix) -> DMatrix<f64> {
    let inner = u.adjoint() * v;
    inner.map(|z| z.norm_sqr())
}

/// `tr(P Q)` for two projections.
pub fn projection_overlap(p: &Projection, q: &Projection) -> f64 {
    overlap_matrix(p.basis(), q.basis()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_and_resolves_graded_spectra() {
        let h = HermitianMatrix::new(ComplexMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.3, 0.4),
                C64::new(0.0, -0.2),
                C64::new(0.3, -0.4),
                C64::new(1.0, 0.0),
                C64::new(0.5, 0.0),
                C64::new(0.0, 0.2),
                C64::new(0.5, 0.0),
                C64::new(-1.0, 0.0),
            ],
        ))
        .unwrap();
        let (x, y) = (eig_hermitian(&h).unwrap(), eig_hermitian_jacobi(&h).unwrap());
        assert!((&x.eigenvalues - &y.eigenvalues).amax() < 1e-14);
        assert!(max_abs(&(y.reconstruct() - h.matrix())) < 1e-14);
        // [[1e16, 1], [1, 1]]: small eigenvalue 1 - 1e-16 to full relative accuracy
        let g = HermitianMatrix::from_real(2, &[1e16, 1.0, 1.0, 1.0]).unwrap();
        let small = eig_hermitian_jacobi(&g).unwrap().eigenvalues[0];
        assert!((small - (1.0 - 1e-16)).abs() < 1e-15);
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    fn herm(dim: usize, re: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real(dim, re).unwrap()
    }

    #[test]
    fn eig_of_diagonal_and_identity() {
        let e = eig_hermitian(&HermitianMatrix::from_real_diag(&[3.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues.as_slice(), &[1.0, 3.0]);
        for z in e.eigenvectors.iter() {
            assert!((z.norm() - 1.0).abs() < 1e-14 || z.norm() < 1e-14);
        }
        let e = eig_hermitian(&HermitianMatrix::identity(3)).unwrap();
        assert!(e.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    }

    #[test]
    fn eig_of_two_by_two() {
        let e = eig_hermitian(&herm(2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.eigenvectors.column(0);
        // (1, -1)/sqrt2 up to phase
        assert!((v0[0].norm() - s).abs() < 1e-14);
        assert!(((v0[0] + v0[1]).norm()) < 1e-14);
    }

    #[test]
    fn apply_function_examples() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 4.0]);
        let r = apply_function(&a, f64::sqrt).unwrap();
        assert!(close(r.matrix(), HermitianMatrix::from_real_diag(&[1.0, 2.0]).matrix(), 1e-15));

        let m = herm(2, &[2.0, 1.0, 1.0, 2.0]);
        let id = apply_function(&m, |x| x).unwrap();
        assert!(close(id.matrix(), m.matrix(), 1e-14));

        let (e1, e3) = (1f64.exp(), 3f64.exp());
        let expected = herm(2, &[(e3 + e1) / 2.0, (e3 - e1) / 2.0, (e3 - e1) / 2.0, (e3 + e1) / 2.0]);
        let got = apply_function(&m, f64::exp).unwrap();
        assert!(close(got.matrix(), expected.matrix(), 1e-12));
    }

    #[test]
    fn apply_function_domain_error() {
        let a = HermitianMatrix::from_real_diag(&[-1.0, 4.0]);
        assert!(matches!(apply_function(&a, f64::ln), Err(Error::Domain(_))));
    }

    #[test]
    fn hermitian_validation() {
        let bad = ComplexMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(bad), Err(Error::NotHermitian(_))));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn hat_log_examples() {
        let e = std::f64::consts::E;
        let a = PsdMatrix::from_diag(&[1.0, e, 0.0]).unwrap();
        assert!(close(hat_log(&a).matrix(), HermitianMatrix::from_real_diag(&[0.0, 1.0, 0.0]).matrix(), 1e-15));
        assert!(max_abs(hat_log(&PsdMatrix::identity(3)).matrix()) < 1e-15);
        let b = PsdMatrix::from_diag(&[e * e, 1.0 / e]).unwrap();
        assert!(close(hat_log(&b).matrix(), HermitianMatrix::from_real_diag(&[2.0, -1.0]).matrix(), 1e-14));
    }

    #[test]
    fn psd_clipping_and_rejection() {
        let a = PsdMatrix::from_diag(&[1.0, -1e-12]).unwrap();
        assert_eq!(a.rank(), 1);
        assert_eq!(a.eigenvalues()[0], 0.0);
        assert!(matches!(PsdMatrix::from_diag(&[1.0, -1e-3]), Err(Error::NotPsd(_))));
        assert!(matches!(PdMatrix::from_diag(&[1.0, 0.0]), Err(Error::NotPd(_))));
    }

    #[test]
    fn support_projection_examples() {
        let p = support_projection(&PsdMatrix::from_diag(&[5.0, 0.0]).unwrap());
        assert!(close(p.matrix(), HermitianMatrix::from_real_diag(&[1.0, 0.0]).matrix(), 1e-15));
        let p = support_projection(&PsdMatrix::from_diag(&[2.0, 3.0]).unwrap());
        assert!(close(p.matrix(), &identity(2), 1e-15));
        let s = 0.6;
        let c = 0.8;
        let xx = herm(2, &[s * s, s * c, s * c, c * c]);
        let p = support_projection(&PsdMatrix::new(xx.clone()).unwrap());
        assert!(close(p.matrix(), xx.matrix(), 1e-14));
    }

    #[test]
    fn intersection_examples() {
        let p = Projection::new(HermitianMatrix::from_real_diag(&[1.0, 1.0, 0.0])).unwrap();
        let q = Projection::new(HermitianMatrix::from_real_diag(&[0.0, 1.0, 1.0])).unwrap();
        let r = intersection_projection(&p, &q).unwrap();
        assert!(close(r.matrix(), HermitianMatrix::from_real_diag(&[0.0, 1.0, 0.0]).matrix(), 1e-14));
        let r = intersection_projection(&p, &p).unwrap();
        assert!(close(r.matrix(), p.matrix(), 1e-14));
        let e1 = Projection::new(HermitianMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let e2 = Projection::new(HermitianMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        assert_eq!(intersection_projection(&e1, &e2).unwrap().rank(), 0);
    }

    #[test]
    fn pseudo_power_examples() {
        let a = PsdMatrix::from_diag(&[4.0, 0.0]).unwrap();
        let half = pseudo_power(&a, 0.5).unwrap();
        assert!(close(half.matrix(), HermitianMatrix::from_real_diag(&[2.0, 0.0]).matrix(), 1e-15));
        let inv = pseudo_power(&a, -1.0).unwrap();
        assert!(close(inv.matrix(), HermitianMatrix::from_real_diag(&[0.25, 0.0]).matrix(), 1e-15));
        let b = PsdMatrix::new(herm(2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        assert!(close(pseudo_power(&b, 1.0).unwrap().matrix(), b.matrix(), 1e-14));
    }

    #[test]
    fn order_examples() {
        let i = HermitianMatrix::identity(2);
        assert!(loewner_leq(&i, &(&i * 2.0), 0.0).unwrap());
        let a = HermitianMatrix::from_real_diag(&[0.0, 2.0]);
        let b = HermitianMatrix::from_real_diag(&[1.0, 1.0]);
        assert!(!loewner_leq(&a, &b, 1e-12).unwrap());
        assert!(loewner_leq(&a, &a, 0.0).unwrap());
        let c1 = PdMatrix::from_diag(&[1.0, 4.0]).unwrap();
        let c2 = PdMatrix::from_diag(&[2.0, 4.0]).unwrap();
        assert!(chaotic_leq(&c1, &c2, 1e-12).unwrap());
        assert!(chaotic_leq(&c1, &c1, 1e-12).unwrap());
        assert!(loewner_leq(&a, &HermitianMatrix::identity(3), 0.0).is_err());
    }

    #[test]
    fn compressed_exp_zero_projection() {
        let (m, lt) = compressed_exp(&Projection::zero(2), &HermitianMatrix::identity(2)).unwrap();
        assert_eq!(lt, f64::NEG_INFINITY);
        assert!(max_abs(&m) == 0.0);
    }
}
