//! Channels and the data-processing inequality.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lab::preservation::DivergenceSelector;
use crate::lab::report::{ExperimentReport, TrialRecord, Verdict, Witness};
use crate::lab::samplers::{random_channel, random_density, trial_rng};
use crate::linalg::{identity, max_abs, ComplexMatrix, HermitianMatrix, PsdMatrix, C64};

/// Completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    kraus: Vec<ComplexMatrix>,
}

impl ChannelSpec {
    /// Checks `sum K_i^dagger K_i = I` within 1e-9.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidInput("a channel needs at least one Kraus operator".into()))?;
        let d = first.ncols();
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in &kraus {
            if k.ncols() != d || k.nrows() != d {
                return Err(Error::DimMismatch(d, k.nrows().max(k.ncols())));
            }
            sum += k.adjoint() * k;
        }
        let err = max_abs(&(sum - identity(d)));
        if err > 1e-9 {
            return Err(Error::InvalidInput(format!("Kraus operators are not trace preserving (error {err:.3e})")));
        }
        Ok(Self { kraus })
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// `A -> tr(A) I / d`, Kraus operators `|i><j| / sqrt(d)`.
    pub fn completely_depolarizing(dim: usize) -> Self {
        let s = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let kraus = (0..dim * dim)
            .map(|k| {
                let mut m = ComplexMatrix::zeros(dim, dim);
                m[(k / dim, k % dim)] = s;
                m
            })
            .collect();
        Self { kraus }
    }

    pub fn random(dim: usize, kraus: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        Self::new(random_channel(dim, kraus, rng))
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn apply(&self, a: &PsdMatrix) -> Result<PsdMatrix> {
        if a.dim() != self.dim() {
            return Err(Error::DimMismatch(self.dim(), a.dim()));
        }
        let out = self.kraus.iter().fold(ComplexMatrix::zeros(a.dim(), a.dim()), |acc, k| acc + k * a.matrix() * k.adjoint());
        PsdMatrix::new(HermitianMatrix::symmetrize(out))
    }
}

/// `D(Λ(A) || Λ(B)) - D(A || B)`; positive values violate monotonicity.
pub fn dpi_gap(selector: &DivergenceSelector, channel: &ChannelSpec, a: &PsdMatrix, b: &PsdMatrix) -> Result<f64> {
    let before = selector.evaluate(a, b)?;
    let after = selector.evaluate(&channel.apply(a)?, &channel.apply(b)?)?;
    match (after.finite(), before.finite()) {
        (Some(x), Some(y)) => Ok(x - y),
        _ if after <= before => Ok(0.0),
        _ => Ok(f64::INFINITY),
    }
}

fn finish(mut report: ExperimentReport, gaps: Vec<(f64, PsdMatrix, PsdMatrix)>, tol: f64) -> ExperimentReport {
    report.records = gaps.iter().enumerate().map(|(k, g)| TrialRecord::new(k, g.0.max(0.0))).collect();
    report.max_deviation = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    report.metrics.insert("violations".into(), gaps.iter().filter(|g| g.0 > tol).count() as f64);
    match gaps.iter().filter(|g| g.0 > tol).max_by(|x, y| x.0.total_cmp(&y.0)) {
        Some((gap, a, b)) => {
            report.verdict = Verdict::Violated;
            report.witness = Some(Witness::pair(a, b, *gap));
        }
        None => report.verdict = Verdict::Preserved,
    }
    report
}

/// Monotonicity under one fixed channel on random density pairs.
pub fn dpi_check(
    selector: &DivergenceSelector,
    channel: &ChannelSpec,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ExperimentReport> {
    let d = channel.dim();
    let gaps = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let a = random_density(d, &mut rng)?.into_psd();
            let b = random_density(d, &mut rng)?.into_psd();
            Ok((dpi_gap(selector, channel, &a, &b)?, a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ExperimentReport::new(format!("dpi/{}", selector.name()), d, seed, trials, Verdict::Preserved);
    Ok(finish(report, gaps, tol))
}

/// Monotonicity with a fresh random channel (`kraus` operators) per trial.
pub fn dpi_random_channels(
    selector: &DivergenceSelector,
    dim: usize,
    kraus: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ExperimentReport> {
    let gaps = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let channel = ChannelSpec::random(dim, kraus, &mut rng)?;
            let a = random_density(dim, &mut rng)?.into_psd();
            let b = random_density(dim, &mut rng)?.into_psd();
            Ok((dpi_gap(selector, &channel, &a, &b)?, a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ExperimentReport::new(format!("dpi/{}/random_channels", selector.name()), dim, seed, trials, Verdict::Preserved);
    Ok(finish(report, gaps, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::samplers::{haar_unitary, seeded};

    #[test]
    fn unitary_channel_gives_equality() {
        let ch = ChannelSpec::unitary(haar_unitary(3, &mut seeded(1))).unwrap();
        let sel = DivergenceSelector::parse("maximal", None, Some("hellinger")).unwrap();
        let r = dpi_check(&sel, &ch, 20, 3, 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Preserved);
        let mut rng = seeded(2);
        let a = random_density(3, &mut rng).unwrap().into_psd();
        let b = random_density(3, &mut rng).unwrap().into_psd();
        assert!(dpi_gap(&sel, &ch, &a, &b).unwrap().abs() < 1e-10);
    }

    #[test]
    fn depolarizing_collapses_to_traces() {
        let ch = ChannelSpec::completely_depolarizing(3);
        assert!(ChannelSpec::new(ch.kraus().to_vec()).is_ok());
        let sel = DivergenceSelector::parse("standard", None, Some("neg_sqrt")).unwrap();
        let mut rng = seeded(5);
        let a = random_density(3, &mut rng).unwrap().into_psd();
        let b = random_density(3, &mut rng).unwrap().into_psd();
        let out = ch.apply(&a).unwrap();
        assert!(max_abs(&(out.matrix() - identity(3) * C64::new(1.0 / 3.0, 0.0))) < 1e-14);
        // both images are I/3, so the divergence drops to f(1) tr = -1
        let after = sel.evaluate(&out, &ch.apply(&b).unwrap()).unwrap().finite().unwrap();
        assert!((after + 1.0).abs() < 1e-12);
        assert!(dpi_gap(&sel, &ch, &a, &b).unwrap() <= 1e-12);
    }

    #[test]
    fn rejects_non_trace_preserving() {
        assert!(ChannelSpec::new(vec![identity(2) * C64::new(0.5, 0.0)]).is_err());
        assert!(ChannelSpec::new(vec![]).is_err());
    }
}
