//! Rényi-type relative entropies and quantum f-divergences.
//!
//! All three Rényi families carry the `(tr A)^{-1}` normalization, so they are
//! scale invariant but not normalized to the usual density-matrix conventions
//! when `tr A != 1`. `A = 0` gives `-inf` for every family.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::linalg::{
    compressed_exp, eig_hermitian, eig_hermitian_jacobi, hat_log, intersection_projection, log_sum_exp, overlap_matrix,
    support_projection, trace_re, ComplexMatrix, HermitianMatrix, PdMatrix, PsdMatrix, C64,
};
use crate::limits::{limit_by_eps, LimitSchedule};
use crate::means::{mean_shifted, singular_mean, MeanFunction};
use crate::opfunc::OperatorConvexFunction;

/// Rényi order `alpha` in `(0, 1) ∪ (1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RenyiParameter(f64);

impl RenyiParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha == 1.0 {
            return Err(Error::AlphaOne);
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for RenyiParameter {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<RenyiParameter> for f64 {
    fn from(a: RenyiParameter) -> f64 {
        a.0
    }
}

fn check_dims(a: &PsdMatrix, b: &PsdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// How `supp A` sits relative to `supp B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportRelation {
    pub orthogonal: bool,
    pub contained: bool,
}

/// `tr(P_A P_B)` decides both questions: it is 0 iff the supports are
/// orthogonal and equals `rank A` iff `supp A ⊆ supp B`.
pub fn support_relation(a: &PsdMatrix, b: &PsdMatrix) -> Result<SupportRelation> {
    check_dims(a, b)?;
    let overlap = overlap_matrix(&a.support_basis(), &b.support_basis()).sum();
    Ok(SupportRelation {
        orthogonal: overlap < defaults::OVERLAP_TOL,
        contained: a.rank() as f64 - overlap < defaults::OVERLAP_TOL,
    })
}

/// Shared case analysis of the conventional and sandwiched families.
/// Returns `Some(value)` when the value is fixed by the conventions.
fn renyi_case(a: &PsdMatrix, b: &PsdMatrix, alpha: RenyiParameter) -> Result<Option<ExtendedReal>> {
    check_dims(a, b)?;
    if a.is_zero() {
        return Ok(Some(ExtendedReal::NegInf));
    }
    let rel = support_relation(a, b)?;
    if rel.orthogonal || (alpha.value() > 1.0 && !rel.contained) {
        return Ok(Some(ExtendedReal::PosInf));
    }
    Ok(None)
}

fn from_trace_ratio(q: f64, trace_a: f64, alpha: RenyiParameter) -> Result<ExtendedReal> {
    ExtendedReal::ln(q.max(0.0) / trace_a)?.scale(1.0 / (alpha.value() - 1.0))
}

/// Conventional Rényi divergence `(alpha-1)^{-1} log((tr A)^{-1} tr A^alpha B^{1-alpha})`.
pub fn renyi(a: &PsdMatrix, b: &PsdMatrix, alpha: RenyiParameter) -> Result<ExtendedReal> {
    if let Some(v) = renyi_case(a, b, alpha)? {
        return Ok(v);
    }
    let al = alpha.value();
    // sum_ij a_i^alpha b_j^(1-alpha) |<u_i, v_j>|^2 has no cancellation, unlike
    // the trace of the product of the two matrix powers
    let x: Vec<f64> = a.eigenvalues().iter().filter(|&&l| l > 0.0).map(|l| l.powf(al)).collect();
    let y: Vec<f64> = b.eigenvalues().iter().filter(|&&l| l > 0.0).map(|l| l.powf(1.0 - al)).collect();
    let w = overlap_matrix(&a.support_basis(), &b.support_basis());
    let q: f64 = (0..x.len()).flat_map(|i| (0..y.len()).map(move |j| (i, j))).map(|(i, j)| x[i] * y[j] * w[(i, j)]).sum();
    from_trace_ratio(q, a.trace(), alpha)
}

/// Sandwiched Rényi divergence, `tr (B^s A B^s)^alpha` with `s = (1-alpha)/(2 alpha)`.
pub fn sandwiched_renyi(a: &PsdMatrix, b: &PsdMatrix, alpha: RenyiParameter) -> Result<ExtendedReal> {
    if let Some(v) = renyi_case(a, b, alpha)? {
        return Ok(v);
    }
    let al = alpha.value();
    let s = (1.0 - al) / (2.0 * al);
    // in the eigenbasis of B, B^s A B^s = D (V^* A V) D with D diagonal; the
    // Jacobi solver keeps the small eigenvalues that the power alpha magnifies
    let v = &b.eig().eigenvectors;
    let mut m = v.adjoint() * a.matrix() * v;
    let d: Vec<f64> = b.eigenvalues().iter().map(|&l| if l > 0.0 { l.powf(s) } else { 0.0 }).collect();
    for i in 0..d.len() {
        m.row_mut(i).scale_mut(d[i]);
        m.column_mut(i).scale_mut(d[i]);
    }
    let eig = eig_hermitian_jacobi(&HermitianMatrix::symmetrize(m))?;
    // the rank is known exactly, so the remaining eigenvalues are rounding noise
    let ker_b = support_projection(b).complement();
    let rank = a.rank() - intersection_projection(&support_projection(a), &ker_b)?.rank();
    let q: f64 = eig.eigenvalues.iter().rev().take(rank).map(|&l| l.max(0.0).powf(al)).sum();
    from_trace_ratio(q, a.trace(), alpha)
}

/// `ln((tr A)^{-1} tr P exp(alpha P log^A P + (1-alpha) P log^B P) P)`, `A != 0`.
fn flat_log_q(a: &PsdMatrix, b: &PsdMatrix, alpha: RenyiParameter) -> Result<f64> {
    let al = alpha.value();
    let p = intersection_projection(&support_projection(a), &support_projection(b))?;
    let m = &(&hat_log(a) * al) + &(&hat_log(b) * (1.0 - al));
    let (_, log_trace) = compressed_exp(&p, &m)?;
    Ok(log_trace - a.trace().ln())
}

/// Log-Euclidean ("flat") Rényi divergence.
///
/// The exponential is taken inside `ran P`, `P` the projection onto
/// `supp A ∩ supp B`; `P = 0` gives trace 0 and hence `+inf` for `alpha < 1`.
pub fn flat_renyi(a: &PsdMatrix, b: &PsdMatrix, alpha: RenyiParameter) -> Result<ExtendedReal> {
    check_dims(a, b)?;
    if a.is_zero() {
        return Ok(ExtendedReal::NegInf);
    }
    if alpha.value() > 1.0 && !support_relation(a, b)?.contained {
        return Ok(ExtendedReal::PosInf);
    }
    let log_q = flat_log_q(a, b, alpha)?;
    ExtendedReal::from_f64(log_q)?.scale(1.0 / (alpha.value() - 1.0))
}

/// `exp~((alpha - 1) D_flat)`, with `exp~(+-inf) = +inf / 0`.
pub fn q_flat(a: &PsdMatrix, b: &PsdMatrix, alpha: RenyiParameter) -> Result<ExtendedReal> {
    check_dims(a, b)?;
    if a.is_zero() || (alpha.value() > 1.0 && !support_relation(a, b)?.contained) {
        return flat_renyi(a, b, alpha)?.scale(alpha.value() - 1.0).map(ExtendedReal::exp);
    }
    Ok(ExtendedReal::from_f64(flat_log_q(a, b, alpha)?)?.exp())
}

/// `ln Q_flat` for positive definite arguments given by their logarithms:
/// `ln tr exp(alpha L_A + (1-alpha) L_B) - ln tr exp(L_A)`.
///
/// Working with logarithms keeps families such as `exp(t(P - I))` usable
/// at large `t`, where the matrices themselves underflow.
pub fn log_q_flat_from_logs(log_a: &HermitianMatrix, log_b: &HermitianMatrix, alpha: RenyiParameter) -> Result<f64> {
    if log_a.dim() != log_b.dim() {
        return Err(Error::DimMismatch(log_a.dim(), log_b.dim()));
    }
    let al = alpha.value();
    let m = &(log_a * al) + &(log_b * (1.0 - al));
    let num: Vec<f64> = eig_hermitian(&m)?.eigenvalues.iter().cloned().collect();
    let den: Vec<f64> = eig_hermitian(log_a)?.eigenvalues.iter().cloned().collect();
    Ok(log_sum_exp(&num) - log_sum_exp(&den))
}

/// Csiszár divergence `sum q_i f(p_i / q_i)`; `q_i = 0` contributes `omega(f) p_i`.
pub fn classical_f_divergence(p: &[f64], q: &[f64], f: &OperatorConvexFunction) -> Result<ExtendedReal> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch(p.len(), q.len()));
    }
    if let Some(bad) = p.iter().chain(q).find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidInput(format!("probability entries must be finite and nonnegative, got {bad}")));
    }
    let mut total = ExtendedReal::ZERO;
    for (&pi, &qi) in p.iter().zip(q) {
        let term = if qi > 0.0 {
            ExtendedReal::Finite(qi * f.eval(pi / qi))
        } else if pi == 0.0 {
            continue;
        } else {
            f.omega().scale(pi)?
        };
        total = total.add(term)?;
    }
    Ok(total)
}

/// Eigenvalue clusters `(value, column indices)`; the kernel is its own group with value 0.
fn spectral_groups(a: &PsdMatrix) -> Vec<(f64, Vec<usize>)> {
    let values = a.eigenvalues();
    let tol = defaults::GROUP_REL * values.max().max(1.0);
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut kernel = Vec::new();
    for (j, &l) in values.iter().enumerate() {
        if l == 0.0 {
            kernel.push(j);
            continue;
        }
        match groups.last_mut() {
            Some((v, idx)) if (l - *v).abs() <= tol => {
                idx.push(j);
                *v += (l - *v) / idx.len() as f64;
            }
            _ => groups.push((l, vec![j])),
        }
    }
    if !kernel.is_empty() {
        groups.insert(0, (0.0, kernel));
    }
    groups
}

/// Standard f-divergence
/// `sum_a sum_{b>0} b f(a/b) tr P_a Q_b + omega(f) sum_a a tr P_a Q_0`.
pub fn standard_f_divergence(a: &PsdMatrix, b: &PsdMatrix, f: &OperatorConvexFunction) -> Result<ExtendedReal> {
    check_dims(a, b)?;
    let overlap = overlap_matrix(&a.eig().eigenvectors, &b.eig().eigenvectors);
    let omega = f.omega();
    let mut total = ExtendedReal::ZERO;
    for (av, ai) in spectral_groups(a) {
        for (bv, bi) in spectral_groups(b) {
            let w: f64 = ai.iter().flat_map(|&i| bi.iter().map(move |&j| (i, j))).map(|(i, j)| overlap[(i, j)]).sum();
            let term = if bv > 0.0 {
                ExtendedReal::Finite(bv * f.eval(av / bv) * w)
            } else if av == 0.0 {
                continue;
            } else if omega.is_finite() {
                omega.scale(av * w)?
            } else if w < defaults::OVERLAP_TOL {
                continue;
            } else {
                omega.scale(av * w)?
            };
            total = total.add(term)?;
        }
    }
    Ok(total)
}

/// Quasi-entropy data: `S_f^K(A, B) = <f(L_A R_B^{-1}) K B^{1/2}, K B^{1/2}>`.
#[derive(Debug, Clone)]
pub struct QuasiEntropyInstance {
    pub a: PsdMatrix,
    pub b: PdMatrix,
    pub k: ComplexMatrix,
    pub f: OperatorConvexFunction,
}

impl QuasiEntropyInstance {
    pub fn new(a: PsdMatrix, b: PdMatrix, k: ComplexMatrix, f: OperatorConvexFunction) -> Result<Self> {
        let d = a.dim();
        if b.dim() != d {
            return Err(Error::DimMismatch(d, b.dim()));
        }
        if k.nrows() != d || k.ncols() != d {
            return Err(Error::DimMismatch(d, k.nrows().max(k.ncols())));
        }
        Ok(Self { a, b, k, f })
    }

    /// `sum_{i,j} f(a_i / b_j) b_j |u_i^dagger K v_j|^2`.
    pub fn value(&self) -> f64 {
        let ua = &self.a.eig().eigenvectors;
        let vb = &self.b.eig().eigenvectors;
        let weights = (ua.adjoint() * &self.k * vb).map(|z| z.norm_sqr());
        let av = self.a.eigenvalues();
        let bv = self.b.eigenvalues();
        let mut total = 0.0;
        for i in 0..av.len() {
            for j in 0..bv.len() {
                total += self.f.eval(av[i] / bv[j]) * bv[j] * weights[(i, j)];
            }
        }
        total
    }
}

pub fn quasi_entropy(inst: &QuasiEntropyInstance) -> f64 {
    inst.value()
}

/// Maximal f-divergence `tr B f(B^{-1/2} A B^{-1/2})` for positive definite `B`.
///
/// Requires finite `omega(f)`. Evaluated on the support of `A`, so `f` is
/// never applied to the noisy zero eigenvalues of a rank-deficient `A`.
pub fn maximal_f_divergence(a: &PsdMatrix, b: &PdMatrix, f: &OperatorConvexFunction) -> Result<f64> {
    f.finite_omega()?;
    check_dims(a, b)?;
    maximal_shifted(a, b.psd(), 0.0, f)
}

/// `D_f(A ‖ B + eps I)` evaluated on the support of `A = W Λ W^*`:
/// `f(0) tr B_eps + tr Λ k(M)` with `M = Λ^{1/2} W^* B_eps^{-1} W Λ^{1/2}` and
/// `k(x) = (f(x) - f(0)) / x`.
///
/// `M` is positive definite, so `f` is never evaluated on the rounding noise
/// around the kernel of `B_eps^{-1/2} A B_eps^{-1/2}`. The `1/eps` part coming
/// from `ker B` is diagonalized separately (it does not depend on `eps`) and
/// added exactly, then `M` goes through the Jacobi solver, which resolves the
/// `O(1)` eigenvalues next to the `O(1/eps)` ones.
fn maximal_shifted(a: &PsdMatrix, b: &PsdMatrix, eps: f64, f: &OperatorConvexFunction) -> Result<f64> {
    let f0 = f.f0();
    let base = f0 * (b.trace() + eps * b.dim() as f64);
    let w = a.support_basis();
    let r = w.ncols();
    if r == 0 {
        return Ok(base);
    }
    let lam: Vec<f64> = a.eigenvalues().iter().cloned().filter(|&l| l > 0.0).collect();
    let mut z = b.eig().eigenvectors.adjoint() * w;
    for (j, l) in lam.iter().enumerate() {
        z.column_mut(j).scale_mut(l.sqrt());
    }
    let (mut kernel, mut support) = (z.clone(), z);
    for (i, &l) in b.eigenvalues().iter().enumerate() {
        if l > 0.0 {
            kernel.row_mut(i).fill(C64::new(0.0, 0.0));
            support.row_mut(i).scale_mut(1.0 / (l + eps).sqrt());
        } else {
            support.row_mut(i).fill(C64::new(0.0, 0.0));
        }
    }
    let n = eig_hermitian(&HermitianMatrix::symmetrize(kernel.adjoint() * kernel))?;
    let q = &n.eigenvectors;
    let floor = 8.0 * f64::EPSILON * r as f64 * a.eig().max();
    let mut m = q.adjoint() * support.adjoint() * support * q;
    for (i, &nu) in n.eigenvalues.iter().enumerate() {
        if nu > floor {
            m[(i, i)] += C64::new(nu / eps, 0.0);
        }
    }
    let m = eig_hermitian_jacobi(&HermitianMatrix::symmetrize(m))?;
    let lam_q = q.adjoint() * ComplexMatrix::from_diagonal(&DVector::from_iterator(r, lam.iter().map(|&l| C64::new(l, 0.0)))) * q;
    let mut total = base;
    for (j, &mu) in m.eigenvalues.iter().enumerate() {
        let u = m.eigenvectors.column(j);
        let weight = u.dotc(&(&lam_q * u)).re;
        let k = (f.eval(mu) - f0) / mu;
        if !k.is_finite() {
            return Err(Error::Domain(format!("function undefined at eigenvalue {mu}")));
        }
        total += weight * k;
    }
    Ok(total)
}

/// `lim_{eps -> 0} D_f(A ‖ B + eps I)` on the given schedule.
pub fn maximal_f_divergence_limit(
    a: &PsdMatrix,
    b: &PsdMatrix,
    f: &OperatorConvexFunction,
    sched: &LimitSchedule,
) -> Result<f64> {
    f.finite_omega()?;
    check_dims(a, b)?;
    limit_by_eps(sched, |eps| maximal_shifted(a, b, eps, f))
}

/// `f(0) tr B + omega(f) tr A - tr((B + eps I) sigma_{h_f} A)` in the limit.
pub fn maximal_f_via_mean(
    a: &PsdMatrix,
    b: &PsdMatrix,
    f: &OperatorConvexFunction,
    sched: &LimitSchedule,
) -> Result<f64> {
    let omega = f.finite_omega()?;
    check_dims(a, b)?;
    let h = MeanFunction::from_opfunc(f)?;
    let affine = f.f0() * b.trace() + omega * a.trace();
    if b.is_pd() {
        return Ok(affine - trace_re(&mean_shifted(b, 0.0, a, &h)?));
    }
    sched.validate()?;
    Ok(affine - trace_re(&singular_mean(b, a, &h)?))
}
