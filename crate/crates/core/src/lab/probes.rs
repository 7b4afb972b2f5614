//! Numerical probes of the proof steps: the rank-one norm limit, the Löwner
//! sandwich around `A + t(P - I)`, and the chaotic-order characterization.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::divergences::{log_q_flat_from_logs, RenyiParameter};
use crate::error::{Error, Result};
use crate::json::MatrixJson;
use crate::lab::report::{ExperimentReport, TrialRecord, Verdict, Witness};
use crate::lab::samplers::{random_pd, random_psd, random_unit_vector, trial_rng};
use crate::linalg::{chaotic_leq, eig_hermitian, identity, ComplexMatrix, HermitianMatrix, PdMatrix, Projection, C64};

/// Strictly increasing bijections of the real line onto `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarMap {
    Exp,
    ScaledExp(f64),
    Softplus,
}

impl ScalarMap {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Self::Exp => x.exp(),
            Self::ScaledExp(c) => c * x.exp(),
            Self::Softplus => {
                if x > 30.0 {
                    x + (-x).exp()
                } else {
                    x.exp().ln_1p()
                }
            }
        }
    }
}

/// Unitarily invariant norms, evaluated on the singular values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Operator,
    Trace,
    Frobenius,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::Operator, NormKind::Trace, NormKind::Frobenius];

    pub fn of_singular_values(self, s: &[f64]) -> f64 {
        match self {
            Self::Operator => s.iter().cloned().fold(0.0, f64::max),
            Self::Trace => s.iter().sum(),
            Self::Frobenius => s.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    /// Value of the norm on rank-one projections (1 for all three).
    pub fn rank_one_constant(self) -> f64 {
        1.0
    }
}

/// `N(g(A + t(P - I)))` along `t_grid`, `P` the projection onto `x`.
#[derive(Debug, Clone)]
pub struct Lemma1Probe {
    pub a: HermitianMatrix,
    pub x: DVector<C64>,
    pub g: ScalarMap,
    pub norm: NormKind,
    pub t_grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Result {
    pub target: f64,
    /// `(t, N(g(A + t(P - I))), relative error)`.
    pub points: Vec<(f64, f64, f64)>,
    pub final_relative_error: f64,
    pub passed: bool,
}

/// Errors below this are treated as converged when comparing the trend.
const LEMMA1_FLOOR: f64 = 1e-13;

impl Lemma1Probe {
    pub fn new(a: HermitianMatrix, x: DVector<C64>, g: ScalarMap, norm: NormKind) -> Result<Self> {
        if x.len() != a.dim() {
            return Err(Error::DimMismatch(a.dim(), x.len()));
        }
        if (x.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("probe vector must be a unit vector (norm {})", x.norm())));
        }
        Ok(Self { a, x, g, norm, t_grid: defaults::PROBE_T_GRID.to_vec() })
    }

    pub fn with_grid(mut self, t_grid: Vec<f64>) -> Self {
        self.t_grid = t_grid;
        self
    }

    /// `c_N g(<Ax, x>)`.
    pub fn target(&self) -> f64 {
        let ax = self.a.matrix() * &self.x;
        let q = self.x.dotc(&ax).re;
        self.norm.rank_one_constant() * self.g.eval(q)
    }
}

pub fn lemma1_probe(p: &Lemma1Probe) -> Result<Lemma1Result> {
    let projection = Projection::rank_one(&p.x);
    let shift = projection.matrix() - identity(p.a.dim());
    let target = p.target();
    let mut points = Vec::with_capacity(p.t_grid.len());
    for &t in &p.t_grid {
        let m = HermitianMatrix::symmetrize(p.a.matrix() + &shift * C64::new(t, 0.0));
        let values: Vec<f64> = eig_hermitian(&m)?.eigenvalues.iter().map(|&l| p.g.eval(l)).collect();
        let n = p.norm.of_singular_values(&values);
        points.push((t, n, (n - target).abs() / target.abs()));
    }
    let err_at = |t: f64| points.iter().find(|q| q.0 == t).map(|q| q.2);
    let final_relative_error = points.last().map_or(f64::INFINITY, |q| q.2);
    let trend_ok = match err_at(100.0) {
        Some(e100) => final_relative_error < e100 || (final_relative_error <= LEMMA1_FLOOR && e100 <= LEMMA1_FLOOR),
        None => true,
    };
    Ok(Lemma1Result { target, points, final_relative_error, passed: final_relative_error < 1e-2 && trend_ok })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub t: f64,
    /// Smallest eigenvalue of `A - lower(t)`.
    pub lower_gap: f64,
    /// Smallest eigenvalue of `upper(t) - A`.
    pub upper_gap: f64,
    /// Same two gaps for the variant shifted by `t(P - I)`.
    pub shifted_lower_gap: f64,
    pub shifted_upper_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
    /// Smallest grid `t` from which both inequalities hold on the rest of the grid.
    pub k: Option<f64>,
    /// Same threshold for the shifted variant.
    pub shifted_k: Option<f64>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.k.is_some()
    }
}

fn min_eig(m: ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(&HermitianMatrix::symmetrize(m))?.min())
}

/// Checks, for each grid `t`,
/// `(<Ax,x> - t^{-1/2}) P + t(P - I) <= A <= (<Ax,x> + t^{-1/2}) P + (t/2)(I - P)`
/// and the version with `t(P - I)` added throughout,
/// `(<Ax,x> - t^{-1/2}) P + 2t(P - I) <= A + t(P - I) <= (<Ax,x> + t^{-1/2}) P + (t/2)(P - I)`.
pub fn sandwich_check(a: &HermitianMatrix, x: &DVector<C64>, t_grid: &[f64]) -> Result<SandwichReport> {
    if x.len() != a.dim() {
        return Err(Error::DimMismatch(a.dim(), x.len()));
    }
    let d = a.dim();
    let p = Projection::rank_one(x);
    let pm = p.matrix().clone();
    let i = identity(d);
    let q = x.dotc(&(a.matrix() * x)).re;
    let am = a.matrix();
    let c = |v: f64| C64::new(v, 0.0);
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let s = t.powf(-0.5);
        let lower = &pm * c(q - s) + (&pm - &i) * c(t);
        let upper = &pm * c(q + s) + (&i - &pm) * c(t / 2.0);
        let shifted_a = am + (&pm - &i) * c(t);
        let shifted_lower = &pm * c(q - s) + (&pm - &i) * c(2.0 * t);
        let shifted_upper = &pm * c(q + s) + (&pm - &i) * c(t / 2.0);
        rows.push(SandwichRow {
            t,
            lower_gap: min_eig(am - lower)?,
            upper_gap: min_eig(upper - am)?,
            shifted_lower_gap: min_eig(&shifted_a - shifted_lower)?,
            shifted_upper_gap: min_eig(shifted_upper - &shifted_a)?,
        });
    }
    let tol = |t: f64| defaults::ORDER_TOL * t.max(1.0);
    let threshold = |ok: &dyn Fn(&SandwichRow) -> bool| -> Option<f64> {
        let mut k = None;
        for r in rows.iter().rev() {
            if ok(r) {
                k = Some(r.t);
            } else {
                break;
            }
        }
        k
    };
    let k = threshold(&|r| r.lower_gap >= -tol(r.t) && r.upper_gap >= -tol(r.t));
    let shifted_k = threshold(&|r| r.shifted_lower_gap >= -tol(r.t) && r.shifted_upper_gap >= -tol(r.t));
    Ok(SandwichReport { rows, k, shifted_k })
}

/// Outcome of the chaotic-order characterization on one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaoticOutcome {
    pub ordered: bool,
    /// Largest observed violation of the predicted `Q` inequality (log scale).
    pub max_violation: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Signed amount by which the predicted inequality fails at `log A`:
/// for `alpha < 1`, `ln Q(A||B) <= ln Q(A||C)`; for `alpha > 1` the reverse.
fn q_violation(log_a: &HermitianMatrix, log_b: &HermitianMatrix, log_c: &HermitianMatrix, alpha: RenyiParameter) -> Result<f64> {
    let qb = log_q_flat_from_logs(log_a, log_b, alpha)?;
    let qc = log_q_flat_from_logs(log_a, log_c, alpha)?;
    Ok(if alpha.value() < 1.0 { qb - qc } else { qc - qb })
}

/// `t (P - I)`, the logarithm of `exp(t(P - I))`.
fn rank_one_log(x: &DVector<C64>, t: f64) -> HermitianMatrix {
    let p = Projection::rank_one(x);
    HermitianMatrix::symmetrize((p.matrix() - identity(x.len())) * C64::new(t, 0.0))
}

/// Tests `B << C  <=>  Q_flat(A||B) <= Q_flat(A||C) for all A` (reversed for `alpha > 1`).
///
/// Ordered pairs are probed with `samples` random positive definite `A` and
/// the family `exp(t(P - I))` for random unit vectors. Unordered pairs get
/// the explicit witness `exp(t(P - I))` with `x` the eigenvector of
/// `log C - log B` for its most negative eigenvalue.
pub fn chaotic_characterization(
    b: &PdMatrix,
    c: &PdMatrix,
    alpha: RenyiParameter,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ChaoticOutcome> {
    if b.dim() != c.dim() {
        return Err(Error::DimMismatch(b.dim(), c.dim()));
    }
    let d = b.dim();
    let (log_b, log_c) = (b.log(), c.log());
    let ordered = chaotic_leq(b, c, defaults::ORDER_TOL)?;
    if ordered {
        let worst = (0..samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = trial_rng(seed, k);
                let mut v = q_violation(&random_pd(d, &mut rng)?.log(), &log_b, &log_c, alpha)?;
                let x = random_unit_vector(d, &mut rng);
                for &t in &defaults::PROBE_T_GRID {
                    v = v.max(q_violation(&rank_one_log(&x, t), &log_b, &log_c, alpha)?);
                }
                Ok(v)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        return Ok(ChaoticOutcome { ordered, max_violation: worst, samples, witness: None });
    }
    let gap = eig_hermitian(&(&log_c - &log_b))?;
    let x = gap.eigenvectors.column(0).into_owned();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &t in &defaults::PROBE_T_GRID {
        let v = q_violation(&rank_one_log(&x, t), &log_b, &log_c, alpha)?;
        if v > best.0 {
            best = (v, t);
        }
    }
    let witness = (best.0 > tol).then(|| {
        let mut w = Witness {
            matrices: Default::default(),
            deviation: best.0,
            params: [("t".to_string(), best.1), ("alpha".to_string(), alpha.value())].into_iter().collect(),
        };
        w.matrices.insert("b".into(), MatrixJson::from_matrix(b.matrix()));
        w.matrices.insert("c".into(), MatrixJson::from_matrix(c.matrix()));
        w.matrices.insert("log_a".into(), MatrixJson::from_matrix(rank_one_log(&x, best.1).matrix()));
        w
    });
    Ok(ChaoticOutcome { ordered, max_violation: best.0, samples: defaults::PROBE_T_GRID.len(), witness })
}

/// Re-evaluates a chaotic-order witness.
pub fn recheck_chaotic_witness(w: &Witness) -> Result<f64> {
    let get = |k: &str| w.matrix(k).ok_or_else(|| Error::InvalidInput(format!("witness lacks `{k}`")));
    let alpha = RenyiParameter::new(*w.params.get("alpha").ok_or_else(|| Error::InvalidInput("witness lacks alpha".into()))?)?;
    let b = get("b")?.to_pd()?;
    let c = get("c")?.to_pd()?;
    q_violation(&get("log_a")?.to_hermitian()?, &b.log(), &c.log(), alpha)
}

/// `C = exp(log B + K)` with `K` positive semidefinite, so `B << C`.
pub fn chaotic_ordered_pair(dim: usize, rng: &mut impl rand::Rng) -> Result<(PdMatrix, PdMatrix)> {
    let b = random_pd(dim, rng)?;
    let k = random_psd(dim, dim, rng)?;
    let c = PdMatrix::new(crate::linalg::PsdMatrix::new(crate::linalg::expm_hermitian(&(&b.log() + k.hermitian()))?)?)?;
    Ok((b, c))
}

/// Random positive definite pair with `log B - log C` not negative semidefinite.
pub fn chaotic_unordered_pair(dim: usize, rng: &mut impl rand::Rng) -> Result<(PdMatrix, PdMatrix)> {
    loop {
        let b = random_pd(dim, rng)?;
        let c = random_pd(dim, rng)?;
        if !chaotic_leq(&b, &c, defaults::ORDER_TOL)? {
            return Ok((b, c));
        }
    }
}

/// Runs the characterization on `pairs` ordered and `pairs` unordered samples.
pub fn chaotic_experiment(dim: usize, alpha: RenyiParameter, pairs: usize, seed: u64, tol: f64) -> Result<ExperimentReport> {
    let outcomes: Vec<(ChaoticOutcome, ChaoticOutcome)> = (0..pairs)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let (b, c) = chaotic_ordered_pair(dim, &mut rng)?;
            let ordered = chaotic_characterization(&b, &c, alpha, 8, crate::lab::samplers::child_seed(seed, k as u64), tol)?;
            let (b, c) = chaotic_unordered_pair(dim, &mut rng)?;
            let unordered = chaotic_characterization(&b, &c, alpha, 0, 0, tol)?;
            Ok((ordered, unordered))
        })
        .collect::<Result<_>>()?;

    let mut fwd = ExperimentReport::new("chaotic/ordered", dim, seed, pairs, Verdict::Preserved);
    fwd.max_deviation = outcomes.iter().map(|o| o.0.max_violation).fold(0.0, f64::max);
    fwd.records = outcomes.iter().enumerate().map(|(k, o)| TrialRecord::new(k, o.0.max_violation.max(0.0))).collect();
    fwd.verdict = if fwd.max_deviation <= tol { Verdict::Preserved } else { Verdict::Violated };

    let mut rev = ExperimentReport::new("chaotic/unordered", dim, seed, pairs, Verdict::Violated);
    rev.records = outcomes
        .iter()
        .enumerate()
        .map(|(k, o)| TrialRecord {
            note: Some(if o.1.witness.is_some() { "witness".into() } else { "no witness".into() }),
            ..TrialRecord::new(k, o.1.max_violation)
        })
        .collect();
    rev.max_deviation = outcomes.iter().map(|o| o.1.max_violation).fold(f64::NEG_INFINITY, f64::max).max(0.0);
    let min_violation = outcomes.iter().map(|o| o.1.max_violation).fold(f64::INFINITY, f64::min);
    rev.metrics.insert("min_witness_violation".into(), min_violation);
    if outcomes.iter().all(|o| o.1.witness.is_some()) {
        rev.verdict = Verdict::Violated;
        rev.witness = outcomes.first().and_then(|o| o.1.witness.clone());
    } else {
        rev.verdict = Verdict::Inconclusive;
    }
    let mut report = ExperimentReport::from_children("chaotic", dim, seed, Verdict::Preserved, vec![fwd, rev]);
    report.metrics.insert("alpha".into(), alpha.value());
    Ok(report)
}

/// Lemma 1 probes on random `(A, x)` for every norm kind.
pub fn lemma1_experiment(dim: usize, g: ScalarMap, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let results: Vec<Vec<Lemma1Result>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let a = crate::lab::samplers::random_hermitian(dim, &mut rng);
            let x = random_unit_vector(dim, &mut rng);
            NormKind::ALL
                .iter()
                .map(|&n| lemma1_probe(&Lemma1Probe::new(a.clone(), x.clone(), g, n)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("lemma1", dim, seed, trials, Verdict::Preserved);
    for (k, rs) in results.iter().enumerate() {
        for r in rs {
            report.max_deviation = report.max_deviation.max(r.final_relative_error);
            let mut rec = TrialRecord::new(k, r.final_relative_error);
            if !r.passed {
                rec.note = Some("trend or endpoint failed".into());
            }
            report.records.push(rec);
        }
    }
    let all = results.iter().flatten().all(|r| r.passed);
    report.verdict = if all { Verdict::Preserved } else { Verdict::Violated };
    Ok(report)
}

/// Sandwich check on random `(A, x)`; reports the largest threshold `K`.
pub fn sandwich_experiment(dim: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let reports: Vec<SandwichReport> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let a = crate::lab::samplers::random_hermitian(dim, &mut rng);
            let x = random_unit_vector(dim, &mut rng);
            sandwich_check(&a, &x, &defaults::PROBE_T_GRID)
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("sandwich", dim, seed, trials, Verdict::Preserved);
    let worst_gap = |r: &SandwichReport| {
        r.rows.last().map_or(f64::INFINITY, |row| row.lower_gap.min(row.upper_gap))
    };
    for (k, r) in reports.iter().enumerate() {
        let mut rec = TrialRecord::new(k, (-worst_gap(r)).max(0.0));
        rec.note = Some(format!(
            "K={} shifted_K={}",
            r.k.map_or("none".to_string(), |v| v.to_string()),
            r.shifted_k.map_or("none".to_string(), |v| v.to_string())
        ));
        report.records.push(rec);
    }
    let max_k = reports.iter().filter_map(|r| r.k).fold(0.0, f64::max);
    report.metrics.insert("max_k".into(), max_k);
    report.metrics.insert(
        "shifted_variant_holds".into(),
        if reports.iter().all(|r| r.shifted_k.is_some()) { 1.0 } else { 0.0 },
    );
    report.verdict = if reports.iter().all(SandwichReport::holds) { Verdict::Preserved } else { Verdict::Violated };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::samplers::seeded;

    fn e(dim: usize, k: usize) -> DVector<C64> {
        let mut v = DVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn lemma1_example() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 2.0]);
        let p = Lemma1Probe::new(a, e(2, 1), ScalarMap::Exp, NormKind::Operator).unwrap();
        let r = lemma1_probe(&p).unwrap();
        assert!((r.target - 2f64.exp()).abs() < 1e-12);
        assert!(r.passed);
        let zero = Lemma1Probe::new(HermitianMatrix::zeros(3), e(3, 0), ScalarMap::Exp, NormKind::Trace).unwrap();
        assert_eq!(zero.target(), 1.0);
    }

    #[test]
    fn lemma1_non_eigenvector_converges() {
        let mut rng = seeded(4);
        let a = crate::lab::samplers::random_hermitian(3, &mut rng);
        let x = random_unit_vector(3, &mut rng);
        for n in NormKind::ALL {
            for g in [ScalarMap::Exp, ScalarMap::ScaledExp(2.5), ScalarMap::Softplus] {
                let r = lemma1_probe(&Lemma1Probe::new(a.clone(), x.clone(), g, n).unwrap()).unwrap();
                assert!(r.passed, "{n:?} {g:?}: {:?}", r.points);
            }
        }
    }

    #[test]
    fn sandwich_examples() {
        let r = sandwich_check(&HermitianMatrix::zeros(2), &e(2, 0), &defaults::PROBE_T_GRID).unwrap();
        assert_eq!(r.k, Some(1.0));
        let r = sandwich_check(&HermitianMatrix::from_real_diag(&[1.0, 2.0]), &e(2, 0), &defaults::PROBE_T_GRID).unwrap();
        assert!(r.k.is_some());
        assert!(r.shifted_k.is_some());
    }

    #[test]
    fn chaotic_examples() {
        let a = RenyiParameter::new(0.5).unwrap();
        let b = PdMatrix::from_diag(&[1.0, 4.0]).unwrap();
        let c = PdMatrix::from_diag(&[2.0, 4.0]).unwrap();
        let o = chaotic_characterization(&b, &b, a, 5, 1, 1e-10).unwrap();
        assert!(o.ordered && o.max_violation <= 1e-12);
        let o = chaotic_characterization(&b, &c, a, 5, 1, 1e-10).unwrap();
        assert!(o.ordered && o.max_violation <= 1e-10);
        let o = chaotic_characterization(&c, &b, a, 5, 1, 1e-10).unwrap();
        assert!(!o.ordered);
        let w = o.witness.expect("witness");
        assert!((recheck_chaotic_witness(&w).unwrap() - w.deviation).abs() < 1e-15);
    }
}
