//! Operator means and the logarithmic product.
//!
//! Argument order follows `mean(B, A) = B^{1/2} h(B^{-1/2} A B^{-1/2}) B^{1/2}`:
//! the first argument is the one that gets inverted.

use std::fmt;
use std::sync::Arc;

use crate::defaults;
use crate::error::{Error, Result};
use crate::linalg::{
    compressed_exp, hat_log, intersection_projection, spectral_norm, support_projection, ComplexMatrix,
    HermitianMatrix, PdMatrix, PsdMatrix, SpectralDecomposition, C64,
};
use crate::limits::LimitSchedule;
use crate::opfunc::{OperatorConvexFunction, ScalarFn};

/// Representing function of a Kubo-Ando mean.
#[derive(Clone)]
pub struct MeanFunction {
    name: String,
    h: ScalarFn,
    /// `lim h(t)/t` as `t -> inf`; value of the transposed function at 0.
    slope_at_inf: f64,
}

impl fmt::Debug for MeanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeanFunction").field("name", &self.name).field("slope_at_inf", &self.slope_at_inf).finish()
    }
}

impl MeanFunction {
    /// Checks `h(0) >= 0` and monotonicity on a log grid.
    pub fn new(
        name: impl Into<String>,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
        slope_at_inf: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(h(0.0) >= 0.0) {
            return Err(Error::InvalidInput(format!("mean function `{name}` has h(0) < 0")));
        }
        let grid: Vec<f64> = (0..=60).map(|k| 10f64.powf(-3.0 + 0.1 * k as f64)).collect();
        for w in grid.windows(2) {
            if h(w[1]) < h(w[0]) {
                return Err(Error::InvalidInput(format!("mean function `{name}` decreases near t = {}", w[0])));
            }
        }
        if !(slope_at_inf >= 0.0) || !slope_at_inf.is_finite() {
            return Err(Error::InvalidInput(format!("mean function `{name}` needs a finite slope at infinity")));
        }
        Ok(Self { name, h: Arc::new(h), slope_at_inf })
    }

    pub fn geometric() -> Self {
        Self { name: "geometric".into(), h: Arc::new(f64::sqrt), slope_at_inf: 0.0 }
    }

    pub fn arithmetic() -> Self {
        Self { name: "arithmetic".into(), h: Arc::new(|t| 0.5 * (1.0 + t)), slope_at_inf: 0.5 }
    }

    pub fn harmonic() -> Self {
        Self { name: "harmonic".into(), h: Arc::new(|t| 2.0 * t / (1.0 + t)), slope_at_inf: 0.0 }
    }

    /// The mean represented by `h_f`.
    pub fn from_opfunc(f: &OperatorConvexFunction) -> Result<Self> {
        f.finite_omega()?;
        let g = f.clone();
        f.h_f(1.0)?;
        Ok(Self {
            name: format!("h_{}", f.name()),
            h: Arc::new(move |t| g.h_f(t).expect("checked finite omega")),
            slope_at_inf: 0.0,
        })
    }

    /// `geometric | arithmetic | harmonic | hf:<function>`.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "geometric" | "sqrt" => Ok(Self::geometric()),
            "arithmetic" => Ok(Self::arithmetic()),
            "harmonic" => Ok(Self::harmonic()),
            other => match other.strip_prefix("hf:") {
                Some(f) => Self::from_opfunc(&crate::opfunc::builtin(f)?),
                None => Err(Error::UnknownFunction(other.to_string())),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.h)(t)
    }

    /// `s h(1/s)`, extended by the slope at infinity at `s = 0`.
    pub fn transpose_eval(&self, s: f64) -> f64 {
        if s == 0.0 {
            self.slope_at_inf
        } else {
            s * self.eval(1.0 / s)
        }
    }
}

const SPECTRAL_NOISE: f64 = 8.0 * f64::EPSILON;

/// `X^{1/2} g(X^{-1/2} Y X^{-1/2}) X^{1/2}` for `X` given by a strictly positive spectrum.
pub(crate) fn operator_perspective(
    x_values: &[f64],
    x: &SpectralDecomposition,
    y: &ComplexMatrix,
    g: impl Fn(f64) -> f64,
) -> Result<ComplexMatrix> {
    let half = x.with_values(&x_values.iter().map(|v| v.sqrt()).collect::<Vec<_>>());
    let inv_half = x.with_values(&x_values.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>());
    let inner = HermitianMatrix::symmetrize(&inv_half * y * &inv_half);
    let eig = crate::linalg::eig_hermitian(&inner)?;
    // g need not be Lipschitz at 0 (sqrt), so rounding noise is zeroed first
    let floor = SPECTRAL_NOISE * x_values.len() as f64 * eig.max().abs();
    let g_inner = crate::linalg::apply_on_spectrum(&eig, |l| g(if l > floor { l } else { 0.0 }))?;
    Ok(&half * g_inner.matrix() * &half)
}

fn condition(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// `(B + eps I) sigma_h A`, choosing the better-conditioned of the two
/// equivalent congruences.
pub(crate) fn mean_shifted(b: &PsdMatrix, eps: f64, a: &PsdMatrix, h: &MeanFunction) -> Result<ComplexMatrix> {
    let b_values: Vec<f64> = b.eigenvalues().iter().map(|l| l + eps).collect();
    let a_values: Vec<f64> = a.eigenvalues().iter().cloned().collect();
    if a.is_pd() && condition(&a_values) < condition(&b_values) {
        let b_mat = b.eig().with_values(&b_values);
        operator_perspective(&a_values, a.eig(), &b_mat, |s| h.transpose_eval(s))
    } else {
        operator_perspective(&b_values, b.eig(), a.matrix(), |t| h.eval(t))
    }
}

fn check_dims(a: &PsdMatrix, b: &PsdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// `B^{1/2} h(B^{-1/2} A B^{-1/2}) B^{1/2}` for positive definite `B`.
///
/// Singular `B` is handled by [`kubo_ando_mean_limit`].
pub fn kubo_ando_mean(b: &PdMatrix, a: &PsdMatrix, h: &MeanFunction) -> Result<PsdMatrix> {
    check_dims(b, a)?;
    let values: Vec<f64> = b.eigenvalues().iter().cloned().collect();
    let m = operator_perspective(&values, b.eig(), a.matrix(), |t| h.eval(t))?;
    PsdMatrix::new(HermitianMatrix::symmetrize(m))
}

/// `lim_{eps -> 0} (B + eps I) sigma_h A`.
///
/// Positive definite `B` goes through [`kubo_ando_mean`]. For singular `B` the
/// limit is `h(0) B + c A + [B]_M sigma_k [A]_M`, where `M = ran A ∩ ran B`,
/// `[.]_M` is the shorted operator onto `M`, `c` the slope at infinity and
/// `k(t) = h(t) - h(0) - c t`. Both shorts are invertible on `M`, so nothing
/// ill-conditioned is ever inverted.
pub fn kubo_ando_mean_limit(
    b: &PsdMatrix,
    a: &PsdMatrix,
    h: &MeanFunction,
    sched: &LimitSchedule,
) -> Result<PsdMatrix> {
    check_dims(b, a)?;
    sched.validate()?;
    if b.is_pd() {
        return kubo_ando_mean(&b.to_pd()?, a, h);
    }
    PsdMatrix::new(HermitianMatrix::symmetrize(singular_mean(b, a, h)?))
}

/// `(W^* A^+ W)^{-1}`: the short of `a` onto the span of the orthonormal
/// columns of `w`, which must lie in the support of `a`.
fn shorted(a: &PsdMatrix, w: &ComplexMatrix) -> Result<PdMatrix> {
    let inv = a.map_support(|l| 1.0 / l);
    let compressed = PsdMatrix::new(HermitianMatrix::symmetrize(w.adjoint() * inv * w))?;
    PdMatrix::new(PsdMatrix::new(HermitianMatrix::symmetrize(compressed.map_support(|l| 1.0 / l)))?)
}

pub(crate) fn singular_mean(b: &PsdMatrix, a: &PsdMatrix, h: &MeanFunction) -> Result<ComplexMatrix> {
    let (h0, slope) = (h.eval(0.0), h.slope_at_inf);
    let mut out = b.matrix() * C64::new(h0, 0.0) + a.matrix() * C64::new(slope, 0.0);
    let m = intersection_projection(&support_projection(a), &support_projection(b))?;
    if m.rank() > 0 {
        let w = m.basis();
        let (sb, sa) = (shorted(b, w)?, shorted(a, w)?);
        let values: Vec<f64> = sb.eigenvalues().iter().cloned().collect();
        let core = operator_perspective(&values, sb.eig(), sa.matrix(), |t| h.eval(t) - h0 - slope * t)?;
        out += w * core * w.adjoint();
    }
    Ok(out)
}

fn log_combination(a: &PsdMatrix, b: &PsdMatrix, weight: f64) -> Result<PsdMatrix> {
    check_dims(a, b)?;
    let p = intersection_projection(&support_projection(a), &support_projection(b))?;
    let m = &(&hat_log(a) + &hat_log(b)) * weight;
    let (out, _) = compressed_exp(&p, &m)?;
    PsdMatrix::new(HermitianMatrix::symmetrize(out))
}

/// Log-Euclidean mean `P exp((P log^ A P + P log^ B P) / 2) P`, `P` onto `supp A ∩ supp B`.
pub fn log_euclidean(a: &PsdMatrix, b: &PsdMatrix) -> Result<PsdMatrix> {
    log_combination(a, b, 0.5)
}

/// Logarithmic product `P exp(P log^ A P + P log^ B P) P`.
pub fn log_product(a: &PsdMatrix, b: &PsdMatrix) -> Result<PsdMatrix> {
    log_combination(a, b, 1.0)
}

/// Doubling schedule for the Lie-Trotter sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterSchedule {
    pub max_doublings: u32,
    pub conv_tol: f64,
}

impl Default for TrotterSchedule {
    fn default() -> Self {
        Self { max_doublings: defaults::TROTTER_MAX_DOUBLINGS, conv_tol: defaults::TROTTER_CONV_TOL }
    }
}

/// `(A^{1/n} B^{1/n})^n` with pseudo-powers.
pub fn trotter_term(a: &PsdMatrix, b: &PsdMatrix, doublings: u32) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    let n = f64::powi(2.0, doublings as i32);
    let y = a.map_support(|l| l.powf(1.0 / n)) * b.map_support(|l| l.powf(1.0 / n));
    let mut x = y;
    for _ in 0..doublings {
        x = &x * &x;
    }
    Ok(x)
}

/// Logarithmic product through the Lie-Trotter limit `lim (A^{1/n} B^{1/n})^n`.
///
/// Runs `n = 1, 2, 4, ...` and accelerates with one Richardson step
/// (`2 X_n - X_{n/2}`, cancelling the `1/n` error term). Stops when two
/// successive extrapolants differ by less than `conv_tol * max(1, ||X||)` in
/// spectral norm; repeated squaring leaves a roundoff floor proportional to `||X||`.
pub fn log_product_trotter(a: &PsdMatrix, b: &PsdMatrix, sched: &TrotterSchedule) -> Result<PsdMatrix> {
    let mut prev_term = trotter_term(a, b, 0)?;
    let mut prev_extrap: Option<ComplexMatrix> = None;
    let mut trace = Vec::new();
    for k in 1..=sched.max_doublings {
        let term = trotter_term(a, b, k)?;
        let extrap = &term * crate::linalg::C64::new(2.0, 0.0) - &prev_term;
        trace.push(crate::linalg::trace_re(&extrap));
        if let Some(p) = &prev_extrap {
            if spectral_norm(&(&extrap - p)) < sched.conv_tol * spectral_norm(&extrap).max(1.0) {
                return PsdMatrix::new(HermitianMatrix::symmetrize(extrap));
            }
        }
        prev_term = term;
        prev_extrap = Some(extrap);
    }
    Err(Error::Convergence { steps: sched.max_doublings as usize, trace: crate::limits::tail(&trace) })
}
