//! Transformations of the positive cone used as preserver candidates.

use crate::defaults;
use crate::error::{Error, Result};
use crate::linalg::{
    compressed_exp, expm_hermitian, hat_log, identity, max_abs, ComplexMatrix, HermitianMatrix, Projection, PsdMatrix,
    C64,
};
use crate::means::log_product;

#[derive(Debug, Clone)]
pub enum TransformSpec {
    /// `A -> lambda U A U^dagger`.
    UnitaryCongruence { u: ComplexMatrix, lambda: f64 },
    /// `A -> lambda U A^T U^dagger`.
    AntiUnitaryCongruence { u: ComplexMatrix, lambda: f64 },
    /// `A -> exp(T (log A) T^dagger + H)`, positive definite inputs only.
    LogLinear { t: ComplexMatrix, h: HermitianMatrix },
    /// `A -> X ⊙ P exp(P T (log^ A) T^dagger P) P`, `P` onto `(T ker A)^⊥`.
    /// With `conjugate`, `T` is conjugate-linear: `A` is transposed first.
    LogProductForm { x: PsdMatrix, t: ComplexMatrix, conjugate: bool },
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.nrows(), cols: u.ncols() });
    }
    let err = max_abs(&(u.adjoint() * u - identity(u.nrows())));
    if err > defaults::RECON_TOL {
        return Err(Error::InvalidInput(format!("matrix is not unitary (error {err:.3e})")));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("scale must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_invertible(t: &ComplexMatrix) -> Result<()> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.nrows(), cols: t.ncols() });
    }
    let sv = t.singular_values();
    let max = sv.max();
    let min = sv.min();
    if !(min > defaults::RANK_REL * max.max(1.0)) {
        return Err(Error::InvalidInput(format!("operator is not invertible (smallest singular value {min:e})")));
    }
    Ok(())
}

impl TransformSpec {
    pub fn unitary(u: ComplexMatrix, lambda: f64) -> Result<Self> {
        check_unitary(&u)?;
        check_lambda(lambda)?;
        Ok(Self::UnitaryCongruence { u, lambda })
    }

    pub fn antiunitary(u: ComplexMatrix, lambda: f64) -> Result<Self> {
        check_unitary(&u)?;
        check_lambda(lambda)?;
        Ok(Self::AntiUnitaryCongruence { u, lambda })
    }

    pub fn log_linear(t: ComplexMatrix, h: HermitianMatrix) -> Result<Self> {
        check_invertible(&t)?;
        if h.dim() != t.nrows() {
            return Err(Error::DimMismatch(t.nrows(), h.dim()));
        }
        Ok(Self::LogLinear { t, h })
    }

    pub fn log_product_form(x: PsdMatrix, t: ComplexMatrix, conjugate: bool) -> Result<Self> {
        check_invertible(&t)?;
        if x.dim() != t.nrows() {
            return Err(Error::DimMismatch(t.nrows(), x.dim()));
        }
        Ok(Self::LogProductForm { x, t, conjugate })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::UnitaryCongruence { .. } => "unitary",
            Self::AntiUnitaryCongruence { .. } => "antiunitary",
            Self::LogLinear { .. } => "log_linear",
            Self::LogProductForm { .. } => "log_product_form",
        }
    }

    /// Scaled unitary or antiunitary congruence.
    pub fn is_congruence(&self) -> bool {
        matches!(self, Self::UnitaryCongruence { .. } | Self::AntiUnitaryCongruence { .. })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::UnitaryCongruence { u, .. } | Self::AntiUnitaryCongruence { u, .. } => u.nrows(),
            Self::LogLinear { t, .. } | Self::LogProductForm { t, .. } => t.nrows(),
        }
    }

    pub fn apply(&self, a: &PsdMatrix) -> Result<PsdMatrix> {
        if a.dim() != self.dim() {
            return Err(Error::DimMismatch(self.dim(), a.dim()));
        }
        match self {
            Self::UnitaryCongruence { u, lambda } => a.congruence(u)?.scaled(*lambda),
            Self::AntiUnitaryCongruence { u, lambda } => a.transpose()?.congruence(u)?.scaled(*lambda),
            Self::LogLinear { t, h } => {
                let log_a = a.to_pd().map_err(|_| Error::Domain("log-linear maps need positive definite input".into()))?.log();
                let m = HermitianMatrix::symmetrize(t * log_a.matrix() * t.adjoint() + h.matrix());
                PsdMatrix::new(expm_hermitian(&m)?)
            }
            Self::LogProductForm { x, t, conjugate } => {
                let a = if *conjugate { a.transpose()? } else { a.clone() };
                log_product(x, &congruence_part(t, &a)?)
            }
        }
    }
}

/// `P exp(P T (log^ A) T^dagger P) P` with `P` onto `(T ker A)^⊥`.
pub fn congruence_part(t: &ComplexMatrix, a: &PsdMatrix) -> Result<PsdMatrix> {
    let kernel = a.kernel_basis();
    let p = if kernel.ncols() == 0 {
        Projection::identity(a.dim())
    } else {
        let image = (t * kernel).qr().q();
        Projection::from_basis(image).complement()
    };
    let m = HermitianMatrix::symmetrize(t * hat_log(a).matrix() * t.adjoint());
    let (out, _) = compressed_exp(&p, &m)?;
    PsdMatrix::new(HermitianMatrix::symmetrize(out))
}

pub fn apply_transform(spec: &TransformSpec, a: &PsdMatrix) -> Result<PsdMatrix> {
    spec.apply(a)
}

/// `log mu * I`, the Hermitian shift that turns a log-linear map into scaling by `mu`.
pub fn scalar_shift(dim: usize, mu: f64) -> HermitianMatrix {
    HermitianMatrix::symmetrize(identity(dim) * C64::new(mu.ln(), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::samplers::{haar_unitary, random_pd, random_psd, seeded};

    #[test]
    fn transform_examples() {
        let mut rng = seeded(1);
        let a = random_pd(3, &mut rng).unwrap().into_psd();
        let two_a = TransformSpec::unitary(identity(3), 2.0).unwrap().apply(&a).unwrap();
        assert!(max_abs(&(two_a.matrix() - a.matrix() * C64::new(2.0, 0.0))) < 1e-14);
        let at = TransformSpec::antiunitary(identity(3), 1.0).unwrap().apply(&a).unwrap();
        assert!(max_abs(&(at.matrix() - a.matrix().transpose())) < 1e-14);
        let mu_a = TransformSpec::log_linear(identity(3), scalar_shift(3, 1.7)).unwrap().apply(&a).unwrap();
        assert!(max_abs(&(mu_a.matrix() - a.matrix() * C64::new(1.7, 0.0))) < 1e-12);
    }

    #[test]
    fn validation() {
        let mut rng = seeded(2);
        assert!(TransformSpec::unitary(identity(2) * C64::new(2.0, 0.0), 1.0).is_err());
        assert!(TransformSpec::unitary(haar_unitary(2, &mut rng), 0.0).is_err());
        assert!(TransformSpec::log_linear(ComplexMatrix::zeros(2, 2), HermitianMatrix::zeros(2)).is_err());
        let spec = TransformSpec::log_linear(identity(2), HermitianMatrix::zeros(2)).unwrap();
        assert!(spec.apply(&PsdMatrix::from_diag(&[1.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn log_product_form_reduces_to_congruence_for_unitary_t() {
        let mut rng = seeded(3);
        let u = haar_unitary(3, &mut rng);
        let a = random_psd(3, 2, &mut rng).unwrap();
        let spec = TransformSpec::log_product_form(PsdMatrix::identity(3), u.clone(), false).unwrap();
        let out = spec.apply(&a).unwrap();
        assert!(max_abs(&(out.matrix() - a.congruence(&u).unwrap().matrix())) < 1e-12);
    }
}
