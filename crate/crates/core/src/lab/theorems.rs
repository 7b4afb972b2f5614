//! End-to-end checks of the three preserver theorems.

use rand::Rng;
use rayon::prelude::*;

use crate::divergences::RenyiParameter;
use crate::error::Result;
use crate::lab::preservation::{test_preservation, DivergenceSelector};
use crate::lab::report::{ExperimentReport, TrialRecord, Verdict, Witness};
use crate::lab::samplers::{
    child_seed, complex_gaussian, haar_unitary, random_hermitian, random_pd, random_psd, seeded, trial_rng, LabRng,
};
use crate::lab::transform::{scalar_shift, TransformSpec};
use crate::linalg::{identity, spectral_norm, ComplexMatrix, HermitianMatrix, PsdMatrix, C64};
use crate::means::{log_euclidean, log_product};
use crate::opfunc::OperatorConvexFunction;

/// Number of falsification runs per theorem.
pub const NEGATIVE_CONTROLS: usize = 20;

/// Deviation a falsification witness must exceed.
pub const WITNESS_THRESHOLD: f64 = 1e-3;

fn uniform(rng: &mut LabRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// `U diag(s) V` with singular values bounded away from 1.
fn non_unitary(dim: usize, rng: &mut LabRng) -> ComplexMatrix {
    let u = haar_unitary(dim, rng);
    let v = haar_unitary(dim, rng);
    let mut s = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let x = if rng.random::<bool>() { uniform(rng, 0.4, 0.8) } else { uniform(rng, 1.25, 1.8) };
        s[(i, i)] = C64::new(x, 0.0);
    }
    u * s * v
}

/// Hermitian with a traceless part of norm about 1.
fn non_scalar_hermitian(dim: usize, rng: &mut LabRng) -> HermitianMatrix {
    let h = random_hermitian(dim, rng);
    let mean = h.trace() / dim as f64;
    let traceless = h.matrix() - identity(dim) * C64::new(mean, 0.0);
    let n = spectral_norm(&traceless).max(1e-12);
    HermitianMatrix::symmetrize(traceless * C64::new(1.0 / n, 0.0))
}

/// Flat-Rényi preservers: scaled unitary and antiunitary congruences keep the
/// divergence within `tol`; log-linear maps with non-unitary `|T|` or
/// non-scalar `H` are caught with a witness above [`WITNESS_THRESHOLD`].
pub fn verify_theorem1(dim: usize, alpha: f64, seed: u64, trials: usize, tol: f64) -> Result<ExperimentReport> {
    let sel = DivergenceSelector::Flat(RenyiParameter::new(alpha)?);
    let mut rng = seeded(seed);
    let mut children = Vec::new();
    for (k, anti) in [false, true].into_iter().enumerate() {
        for (j, lambda) in [1.0, uniform(&mut rng, 0.3, 3.0)].into_iter().enumerate() {
            let u = haar_unitary(dim, &mut rng);
            let spec = if anti { TransformSpec::antiunitary(u, lambda)? } else { TransformSpec::unitary(u, lambda)? };
            children.push(test_preservation(&spec, &sel, dim, trials, child_seed(seed, (2 * k + j) as u64), tol)?);
        }
    }
    let specs: Vec<TransformSpec> = (0..NEGATIVE_CONTROLS)
        .map(|k| {
            let (t, h) = match k % 3 {
                0 => (non_unitary(dim, &mut rng), HermitianMatrix::zeros(dim)),
                1 => (haar_unitary(dim, &mut rng), non_scalar_hermitian(dim, &mut rng)),
                _ => {
                    let mu = uniform(&mut rng, 0.5, 2.0);
                    (non_unitary(dim, &mut rng), scalar_shift(dim, mu))
                }
            };
            TransformSpec::log_linear(t, h)
        })
        .collect::<Result<_>>()?;
    let negatives = specs
        .par_iter()
        .enumerate()
        .map(|(k, spec)| {
            test_preservation(spec, &sel, dim, crate::defaults::SEARCH_BASE_TRIALS, child_seed(seed, 100 + k as u64), WITNESS_THRESHOLD)
        })
        .collect::<Result<Vec<_>>>()?;
    children.extend(negatives);
    let mut report = ExperimentReport::from_children("theorem1", dim, seed, Verdict::Preserved, children);
    report.metrics.insert("alpha".into(), alpha);
    Ok(report)
}

/// Maximal f-divergence preservers: congruences with `lambda = 1` keep `D_f`,
/// `lambda = 2` scales it by 2, and `D_f(A||A) = f(1) tr A`.
pub fn verify_theorem2(dim: usize, f: &OperatorConvexFunction, seed: u64, trials: usize, tol: f64) -> Result<ExperimentReport> {
    f.finite_omega()?;
    let sel = DivergenceSelector::Maximal(f.clone());
    let mut rng = seeded(seed);
    let mut children = Vec::new();
    let u = haar_unitary(dim, &mut rng);
    children.push(test_preservation(&TransformSpec::unitary(u, 1.0)?, &sel, dim, trials, child_seed(seed, 0), tol)?);
    let u = haar_unitary(dim, &mut rng);
    children.push(test_preservation(&TransformSpec::antiunitary(u, 1.0)?, &sel, dim, trials, child_seed(seed, 1), tol)?);
    let u = haar_unitary(dim, &mut rng);
    let mut scaled = test_preservation(&TransformSpec::unitary(u, 2.0)?, &sel, dim, trials, child_seed(seed, 2), tol)?;
    scaled.experiment.push_str("/lambda=2");
    children.push(scaled);

    let f1 = f.eval(1.0);
    children.push(identity_check("theorem2/self_divergence", dim, trials, child_seed(seed, 3), tol, |rng| {
        let a = random_pd(dim, rng)?;
        let v = crate::divergences::maximal_f_divergence(&a, &a, f)?;
        Ok(((v - f1 * a.trace()).abs(), vec![("a", a.into_psd())]))
    })?);
    let mut report = ExperimentReport::from_children("theorem2", dim, seed, Verdict::Preserved, children);
    report.metrics.insert("f(1)".into(), f1);
    Ok(report)
}

/// Runs `check` on independent trials; `preserved` iff every deviation is within `tol`.
/// The returned matrices of the worst trial become the witness.
pub fn identity_check<F>(name: &str, dim: usize, trials: usize, seed: u64, tol: f64, check: F) -> Result<ExperimentReport>
where
    F: Fn(&mut LabRng) -> Result<(f64, Vec<(&'static str, PsdMatrix)>)> + Sync,
{
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|k| check(&mut trial_rng(seed, k)))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ExperimentReport::new(name, dim, seed, trials, Verdict::Preserved);
    report.records = outcomes.iter().enumerate().map(|(k, o)| TrialRecord::new(k, o.0)).collect();
    report.max_deviation = outcomes.iter().map(|o| o.0).fold(0.0, f64::max);
    match outcomes.iter().filter(|o| !(o.0 <= tol)).max_by(|x, y| x.0.total_cmp(&y.0)) {
        Some((dev, mats)) => {
            report.verdict = Verdict::Violated;
            let mut w = Witness { matrices: Default::default(), deviation: *dev, params: Default::default() };
            for (key, m) in mats {
                w.matrices.insert(key.to_string(), crate::json::MatrixJson::from_matrix(m.matrix()));
            }
            report.witness = Some(w);
        }
        None => report.verdict = Verdict::Preserved,
    }
    Ok(report)
}

/// A pair of PSD matrices drawn from one of three regimes: both positive
/// definite, independent random ranks, or nested supports inside a shared subspace.
pub fn random_psd_pair(dim: usize, rng: &mut LabRng) -> Result<(PsdMatrix, PsdMatrix)> {
    match rng.random_range(0..3) {
        0 => Ok((random_pd(dim, rng)?.into_psd(), random_pd(dim, rng)?.into_psd())),
        1 => {
            let ra = rng.random_range(1..=dim);
            let rb = rng.random_range(1..=dim);
            Ok((random_psd(dim, ra, rng)?, random_psd(dim, rb, rng)?))
        }
        _ => {
            let k = rng.random_range(1..=dim);
            let w = haar_unitary(dim, rng).columns(0, k).into_owned();
            let ga = complex_gaussian(k, k, rng);
            let gb = complex_gaussian(k, k, rng);
            let extra = complex_gaussian(dim, 1, rng);
            let a = &w * &ga * ga.adjoint() * w.adjoint();
            let b = &w * &gb * gb.adjoint() * w.adjoint() + &extra * extra.adjoint();
            Ok((PsdMatrix::new(HermitianMatrix::symmetrize(a))?, PsdMatrix::new(HermitianMatrix::symmetrize(b))?))
        }
    }
}

fn relative_gap(x: &PsdMatrix, y: &PsdMatrix) -> f64 {
    spectral_norm(&(x.matrix() - y.matrix())) / spectral_norm(y.matrix()).max(1.0)
}

/// `||phi(A ◇ B) - phi(A) ◇ phi(B)||` relative to the size of the right side.
pub fn morphism_deviation(spec: &TransformSpec, a: &PsdMatrix, b: &PsdMatrix) -> Result<f64> {
    let left = spec.apply(&log_euclidean(a, b)?)?;
    let right = log_euclidean(&spec.apply(a)?, &spec.apply(b)?)?;
    Ok(relative_gap(&left, &right))
}

fn random_invertible(dim: usize, rng: &mut LabRng) -> ComplexMatrix {
    identity(dim) + complex_gaussian(dim, dim, rng) * C64::new(0.4, 0.0)
}

/// Log-Euclidean morphisms: maps of the form `X ⊙ P exp(P T (log^ A) T^* P) P`
/// respect `◇`, so does `X ⊙ phi(.)` for a morphism `phi`, and
/// `sqrt(A ⊙ B) = sqrt A ⊙ sqrt B`.
pub fn verify_theorem3(dim: usize, seed: u64, trials: usize, tol: f64) -> Result<ExperimentReport> {
    let mut rng = seeded(seed);
    let mut specs = vec![("identity", TransformSpec::log_product_form(PsdMatrix::identity(dim), identity(dim), false)?)];
    let u = haar_unitary(dim, &mut rng);
    specs.push(("unitary", TransformSpec::unitary(u, 1.0)?));
    for (k, conjugate) in [false, true, false, true].into_iter().enumerate() {
        let x = random_pd(dim, &mut rng)?.into_psd();
        let t = if k < 2 { haar_unitary(dim, &mut rng) } else { random_invertible(dim, &mut rng) };
        let name = if conjugate { "form/conjugate_linear" } else { "form/linear" };
        specs.push((name, TransformSpec::log_product_form(x, t, conjugate)?));
    }
    let mut children = Vec::new();
    for (k, (name, spec)) in specs.iter().enumerate() {
        let exp_name = format!("theorem3/morphism/{name}");
        children.push(identity_check(&exp_name, dim, trials, child_seed(seed, k as u64), tol, |rng| {
            let (a, b) = random_psd_pair(dim, rng)?;
            Ok((morphism_deviation(spec, &a, &b)?, vec![("a", a), ("b", b)]))
        })?);
    }
    // X ⊙ (U . U^*) with singular X
    let closure_seed = child_seed(seed, 50);
    children.push(identity_check("theorem3/product_closure", dim, trials, closure_seed, tol, |rng| {
        let rank = rng.random_range(1..=dim);
        let x = random_psd(dim, rank, rng)?;
        let u = haar_unitary(dim, rng);
        let (a, b) = random_psd_pair(dim, rng)?;
        let phi = |m: &PsdMatrix| -> Result<PsdMatrix> { log_product(&x, &m.congruence(&u)?) };
        let left = phi(&log_euclidean(&a, &b)?)?;
        let right = log_euclidean(&phi(&a)?, &phi(&b)?)?;
        Ok((relative_gap(&left, &right), vec![("a", a), ("b", b), ("x", x)]))
    })?);
    children.push(identity_check("theorem3/sqrt_product", dim, trials, child_seed(seed, 51), tol, |rng| {
        let (a, b) = random_psd_pair(dim, rng)?;
        let left = crate::linalg::pseudo_power(&log_product(&a, &b)?, 0.5)?;
        let right = log_product(&crate::linalg::pseudo_power(&a, 0.5)?, &crate::linalg::pseudo_power(&b, 0.5)?)?;
        Ok((relative_gap(&left, &right), vec![("a", a), ("b", b)]))
    })?);
    Ok(ExperimentReport::from_children("theorem3", dim, seed, Verdict::Preserved, children))
}
