//! Does a transformation leave a divergence invariant?

use rayon::prelude::*;

use crate::defaults;
use crate::divergences::{
    flat_renyi, maximal_f_divergence, maximal_f_divergence_limit, renyi, sandwiched_renyi, standard_f_divergence,
    RenyiParameter,
};
use crate::error::{Error, Result};
use crate::ext::ExtendedReal;
use crate::lab::report::{ext, ExperimentReport, TrialRecord, Verdict, Witness};
use crate::lab::samplers::{child_seed, random_hermitian, random_pd, seeded, trial_rng};
use crate::lab::transform::TransformSpec;
use crate::limits::LimitSchedule;
use crate::linalg::{expm_hermitian, PdMatrix, PsdMatrix};
use crate::opfunc::{self, OperatorConvexFunction};

#[derive(Debug, Clone)]
pub enum DivergenceSelector {
    Renyi(RenyiParameter),
    Sandwiched(RenyiParameter),
    Flat(RenyiParameter),
    Standard(OperatorConvexFunction),
    Maximal(OperatorConvexFunction),
}

impl DivergenceSelector {
    /// Builds a selector from CLI-style names, checking that `alpha` is given
    /// exactly for the Rényi families and `f` exactly for the f-divergences.
    pub fn parse(name: &str, alpha: Option<f64>, f: Option<&str>) -> Result<Self> {
        let need_alpha = matches!(name, "renyi" | "sandwiched" | "flat");
        let need_f = matches!(name, "standard" | "maximal");
        if !need_alpha && !need_f {
            return Err(Error::InvalidInput(format!(
                "unknown divergence `{name}` (expected renyi, sandwiched, flat, standard or maximal)"
            )));
        }
        if need_alpha && f.is_some() {
            return Err(Error::InvalidInput(format!("`{name}` takes --alpha, not --f")));
        }
        if need_f && alpha.is_some() {
            return Err(Error::InvalidInput(format!("`{name}` takes --f, not --alpha")));
        }
        if need_alpha {
            let a = alpha.ok_or_else(|| Error::InvalidInput(format!("`{name}` requires --alpha")))?;
            let a = RenyiParameter::new(a)?;
            return Ok(match name {
                "renyi" => Self::Renyi(a),
                "sandwiched" => Self::Sandwiched(a),
                _ => Self::Flat(a),
            });
        }
        let f = opfunc::builtin(f.ok_or_else(|| Error::InvalidInput(format!("`{name}` requires --f")))?)?;
        if name == "maximal" {
            f.finite_omega()?;
            Ok(Self::Maximal(f))
        } else {
            Ok(Self::Standard(f))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Renyi(_) => "renyi",
            Self::Sandwiched(_) => "sandwiched",
            Self::Flat(_) => "flat",
            Self::Standard(_) => "standard",
            Self::Maximal(_) => "maximal",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Self::Renyi(a) | Self::Sandwiched(a) | Self::Flat(a) => Some(a.value()),
            _ => None,
        }
    }

    pub fn function(&self) -> Option<&OperatorConvexFunction> {
        match self {
            Self::Standard(f) | Self::Maximal(f) => Some(f),
            _ => None,
        }
    }

    /// Rényi families are invariant under joint scaling; f-divergences are
    /// homogeneous of degree one.
    pub fn scale_invariant(&self) -> bool {
        self.alpha().is_some()
    }

    pub fn evaluate(&self, a: &PsdMatrix, b: &PsdMatrix) -> Result<ExtendedReal> {
        self.evaluate_with(a, b, &LimitSchedule::default())
    }

    /// As [`Self::evaluate`], with the schedule used for singular `B` under `maximal`.
    pub fn evaluate_with(&self, a: &PsdMatrix, b: &PsdMatrix, sched: &LimitSchedule) -> Result<ExtendedReal> {
        match self {
            Self::Renyi(al) => renyi(a, b, *al),
            Self::Sandwiched(al) => sandwiched_renyi(a, b, *al),
            Self::Flat(al) => flat_renyi(a, b, *al),
            Self::Standard(f) => standard_f_divergence(a, b, f),
            Self::Maximal(f) => match b.to_pd() {
                Ok(b) => maximal_f_divergence(a, &b, f).map(ExtendedReal::Finite),
                Err(_) => maximal_f_divergence_limit(a, b, f, sched).map(ExtendedReal::Finite),
            },
        }
    }
}

/// Verdict the preserver theorems predict.
pub fn expected_verdict(spec: &TransformSpec, selector: &DivergenceSelector) -> Verdict {
    match spec {
        TransformSpec::UnitaryCongruence { lambda, .. } | TransformSpec::AntiUnitaryCongruence { lambda, .. } => {
            if *lambda == 1.0 || selector.scale_invariant() {
                Verdict::Preserved
            } else {
                Verdict::Violated
            }
        }
        _ => Verdict::Violated,
    }
}

/// `(|D(phi A || phi B) - D(A || B)|, relative deviation)`.
pub fn deviation(
    spec: &TransformSpec,
    selector: &DivergenceSelector,
    a: &PsdMatrix,
    b: &PsdMatrix,
) -> Result<(f64, Option<f64>)> {
    let before = selector.evaluate(a, b)?;
    let after = selector.evaluate(&spec.apply(a)?, &spec.apply(b)?)?;
    let dev = after.distance(before);
    let rel = before.finite().filter(|v| v.abs() > 1e-12).map(|v| dev / v.abs());
    Ok((dev, rel))
}

/// Re-evaluates the deviation stored in a witness.
pub fn recheck_witness(spec: &TransformSpec, selector: &DivergenceSelector, w: &Witness) -> Result<f64> {
    let get = |k: &str| {
        w.matrix(k).ok_or_else(|| Error::InvalidInput(format!("witness lacks matrix `{k}`")))?.to_psd()
    };
    Ok(deviation(spec, selector, &get("a")?, &get("b")?)?.0)
}

fn perturb(a: &PdMatrix, step: f64, rng: &mut impl rand::Rng) -> Result<PdMatrix> {
    let h = random_hermitian(a.dim(), rng);
    let m = &a.log() + &(&h * step);
    PdMatrix::new(PsdMatrix::new(expm_hermitian(&m)?)?)
}

/// Samples positive definite pairs and records the largest deviation.
///
/// A deviation above `tol` gives `violated` with the worst pair as witness.
/// Otherwise congruences are reported `preserved`; any other transformation
/// gets a local search around the worst pair and, failing that, `inconclusive`.
pub fn test_preservation(
    spec: &TransformSpec,
    selector: &DivergenceSelector,
    dim: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ExperimentReport> {
    if spec.dim() != dim {
        return Err(Error::DimMismatch(spec.dim(), dim));
    }
    let samples: Vec<(PdMatrix, PdMatrix, f64, Option<f64>)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let a = random_pd(dim, &mut rng)?;
            let b = random_pd(dim, &mut rng)?;
            let (dev, rel) = deviation(spec, selector, &a, &b)?;
            Ok((a, b, dev, rel))
        })
        .collect::<Result<_>>()?;

    let name = format!("preserve/{}/{}", spec.kind(), selector.name());
    let mut report = ExperimentReport::new(name, dim, seed, trials, expected_verdict(spec, selector));
    report.records = samples
        .iter()
        .enumerate()
        .map(|(k, (_, _, dev, rel))| TrialRecord { relative_deviation: rel.map(ext), ..TrialRecord::new(k, *dev) })
        .collect();
    let Some(worst) = samples.iter().enumerate().max_by(|x, y| x.1 .2.total_cmp(&y.1 .2)).map(|(k, _)| k) else {
        report.verdict = if spec.is_congruence() { Verdict::Preserved } else { Verdict::Inconclusive };
        return Ok(report);
    };
    let (a, b, dev, _) = &samples[worst];
    report.max_deviation = *dev;
    let max_rel = samples.iter().filter_map(|s| s.3).fold(0.0, f64::max);
    report.metrics.insert("max_relative_deviation".into(), max_rel);
    if *dev > tol {
        report.verdict = Verdict::Violated;
        report.witness = Some(Witness::pair(a, b, *dev));
        return Ok(report);
    }
    if spec.is_congruence() {
        report.verdict = Verdict::Preserved;
        return Ok(report);
    }

    let (mut a, mut b, mut best) = (a.clone(), b.clone(), *dev);
    let mut rng = seeded(child_seed(seed, u64::MAX));
    for r in 0..defaults::SEARCH_REFINEMENTS {
        let step = if r < defaults::SEARCH_REFINEMENTS / 2 { 0.1 } else { 0.01 };
        let a2 = perturb(&a, step, &mut rng)?;
        let b2 = perturb(&b, step, &mut rng)?;
        let (d2, _) = deviation(spec, selector, &a2, &b2)?;
        if d2 > best {
            (a, b, best) = (a2, b2, d2);
            if best > tol {
                break;
            }
        }
    }
    report.max_deviation = best;
    report.metrics.insert("refined".into(), 1.0);
    if best > tol {
        report.verdict = Verdict::Violated;
        report.witness = Some(Witness::pair(&a, &b, best));
    } else {
        report.verdict = Verdict::Inconclusive;
    }
    Ok(report)
}
