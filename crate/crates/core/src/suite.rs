//! Named invariant suites, one per module, run by `qdiv suite`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergences::{
    flat_renyi, maximal_f_divergence, maximal_f_divergence_limit, maximal_f_via_mean, renyi, sandwiched_renyi,
    standard_f_divergence, RenyiParameter,
};
use crate::error::{Error, Result};
use crate::ext::{f64_ext, ExtendedReal};
use crate::lab::samplers::{
    haar_unitary, random_commuting_pair, random_density, random_density_of_rank, random_hermitian, random_pd, random_psd,
    trial_rng, LabRng,
};
use crate::lab::theorems::{random_psd_pair, verify_theorem1, verify_theorem2};
use crate::limits::LimitSchedule;
use crate::linalg::{
    apply_function, eig_hermitian, expm_hermitian, hat_log, intersection_projection, loewner_leq, max_abs,
    pseudo_power, spectral_norm, support_projection, trace_re, ComplexMatrix, HermitianMatrix, PdMatrix, PsdMatrix, C64,
};
use crate::means::{
    kubo_ando_mean, kubo_ando_mean_limit, log_euclidean, log_product, MeanFunction,
};
use crate::opfunc::{self, finite_omega_builtins, min_test, standard_grid};

pub const SUITES: [&str; 5] = ["linalg", "opfunc", "divergences", "means", "lab"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "all_suites")]
    pub suites: Vec<String>,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Replaces every per-property tolerance when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn all_suites() -> Vec<String> {
    SUITES.iter().map(|s| s.to_string()).collect()
}

fn default_dim() -> usize {
    3
}

fn default_trials() -> usize {
    30
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { suites: all_suites(), dim: default_dim(), trials: default_trials(), seed: 0, tol: None }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("suite config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(Error::InvalidInput(format!("unknown suite `{s}` (expected one of {})", SUITES.join(", "))));
        }
        if !(2..=8).contains(&self.dim) {
            return Err(Error::InvalidInput(format!("suite dim must lie in 2..=8, got {}", self.dim)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be positive".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidInput(format!("tol must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub suite: String,
    pub property: String,
    #[serde(with = "f64_ext")]
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub dim: usize,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub results: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!(
                "{} {}/{} max_dev={} tol={:e}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite,
                r.property,
                ExtendedReal::from_f64(r.max_deviation).unwrap_or(ExtendedReal::PosInf),
                r.tol
            ));
        }
        out.push_str(if self.passed { "all properties passed\n" } else { "some properties failed\n" });
        out
    }
}

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    suite: &'static str,
    results: Vec<PropertyResult>,
    counter: u64,
}

impl Runner<'_> {
    /// Max over trials of `check`; each property gets its own seed offset.
    fn prop<F>(&mut self, name: &str, tol: f64, check: F) -> Result<()>
    where
        F: Fn(&mut LabRng) -> Result<f64> + Sync,
    {
        self.counter += 1;
        let seed = crate::lab::samplers::child_seed(self.cfg.seed, self.counter);
        let dev = (0..self.cfg.trials)
            .into_par_iter()
            .map(|k| check(&mut trial_rng(seed, k)))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, |m: f64, d| if d.is_nan() { f64::INFINITY } else { m.max(d) });
        self.record(name, tol, dev);
        Ok(())
    }

    fn record(&mut self, name: &str, tol: f64, dev: f64) {
        let tol = self.cfg.tol.unwrap_or(tol);
        self.results.push(PropertyResult {
            suite: self.suite.to_string(),
            property: name.to_string(),
            max_deviation: dev,
            tol,
            passed: dev <= tol,
        });
    }
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    max_abs(&(a - b)) / max_abs(b).max(1.0)
}

fn ext_gap(x: ExtendedReal, y: ExtendedReal) -> f64 {
    x.distance(y)
}

fn linalg_suite(r: &mut Runner<'_>) -> Result<()> {
    let d = r.cfg.dim;
    r.prop("eig_reconstruction", 1e-10, |rng| {
        let m = random_hermitian(d, rng);
        let e = eig_hermitian(&m)?;
        Ok(max_abs(&(e.reconstruct() - m.matrix())) / spectral_norm(m.matrix()).max(f64::MIN_POSITIVE))
    })?;
    r.prop("congruence_covariance", 1e-9, |rng| {
        let m = random_hermitian(d, rng);
        let u = haar_unitary(d, rng);
        let left = apply_function(&m.congruence(&u), f64::exp)?;
        let right = apply_function(&m, f64::exp)?.congruence(&u);
        Ok(rel(left.matrix(), right.matrix()))
    })?;
    r.prop("log_exp_round_trip", 1e-9, |rng| {
        let a = random_pd(d, rng)?;
        Ok(rel(expm_hermitian(&hat_log(&a))?.matrix(), a.matrix()))
    })?;
    r.prop("pseudo_power_additivity", 1e-9, |rng| {
        let a = random_psd(d, rng.random_range(1..=d), rng)?;
        let (p, q) = (0.1 + rng.random::<f64>(), 0.1 + rng.random::<f64>());
        let left = pseudo_power(&a, p)?.matrix() * pseudo_power(&a, q)?.matrix();
        Ok(rel(&left, pseudo_power(&a, p + q)?.matrix()))
    })?;
    r.prop("loewner_implies_chaotic", 1e-9, |rng| {
        let a = random_pd(d, rng)?;
        let k = random_psd(d, d, rng)?;
        let b = PdMatrix::from_matrix(a.matrix() + k.matrix())?;
        if !loewner_leq(a.hermitian(), b.hermitian(), 0.0)? {
            return Ok(f64::INFINITY);
        }
        let gap = eig_hermitian(&(&b.log() - &a.log()))?.min();
        Ok((-gap).max(0.0))
    })?;
    r.prop("intersection_projection", 1e-9, |rng| {
        let (a, b) = random_psd_pair(d, rng)?;
        let (pa, pb) = (support_projection(&a), support_projection(&b));
        let pab = intersection_projection(&pa, &pb)?;
        let pba = intersection_projection(&pb, &pa)?;
        let paa = intersection_projection(&pa, &pa)?;
        let sym = max_abs(&(pab.matrix() - pba.matrix()));
        let idem = max_abs(&(paa.matrix() - pa.matrix()));
        let below_a = (-eig_hermitian(&(pa.hermitian() - pab.hermitian()))?.min()).max(0.0);
        let below_b = (-eig_hermitian(&(pb.hermitian() - pab.hermitian()))?.min()).max(0.0);
        Ok(sym.max(idem).max(below_a).max(below_b))
    })?;
    Ok(())
}

fn opfunc_suite(r: &mut Runner<'_>) -> Result<()> {
    let fs = finite_omega_builtins();
    let mut repr = 0.0f64;
    let mut monotone = 0.0f64;
    let mut dd = 0.0f64;
    let grid = standard_grid();
    for f in &fs {
        for &t in std::iter::once(&0.0).chain(&grid) {
            let e = f.eval(t);
            repr = repr.max((f.reconstruct(t)? - e).abs() / (1.0 + e.abs()));
        }
        let h: Vec<f64> = grid.iter().map(|&t| f.h_f(t)).collect::<Result<_>>()?;
        for k in 1..grid.len() {
            monotone = monotone.max(h[k - 1] - h[k]);
        }
        for k in 1..grid.len() - 1 {
            let s1 = (h[k] - h[k - 1]) / (grid[k] - grid[k - 1]);
            let s2 = (h[k + 1] - h[k]) / (grid[k + 1] - grid[k]);
            monotone = monotone.max(s2 - s1);
        }
        let ts: Vec<f64> = (0..20).map(|k| 1.1 + 0.5 * k as f64).collect();
        for w in ts.windows(2) {
            for &s in &ts {
                if s != w[0] && s != w[1] {
                    // strictly increasing in the first argument
                    let gap = f.divided_difference(w[1], s) - f.divided_difference(w[0], s);
                    dd = dd.max(if gap > 0.0 { 0.0 } else { 1.0 });
                }
            }
        }
    }
    r.record("representation_reconstruction", 1e-6, repr);
    r.record("h_f_monotone_concave", 1e-8, monotone);
    r.record("divided_difference_strictly_increasing", 0.0, dd);
    Ok(())
}

fn alphas() -> Vec<RenyiParameter> {
    [0.3, 0.5, 2.0, 3.0].iter().map(|&a| RenyiParameter::new(a).expect("valid alpha")).collect()
}

fn divergences_suite(r: &mut Runner<'_>) -> Result<()> {
    let d = r.cfg.dim;
    let sched = LimitSchedule::default();
    r.prop("unitary_invariance", 1e-8, |rng| {
        let (a, b) = (random_pd(d, rng)?.into_psd(), random_psd(d, rng.random_range(1..=d), rng)?);
        let u = haar_unitary(d, rng);
        let (ua, ub) = (a.congruence(&u)?, b.congruence(&u)?);
        let mut dev = 0.0f64;
        for al in alphas() {
            for fam in [renyi, sandwiched_renyi, flat_renyi] {
                dev = dev.max(ext_gap(fam(&ua, &ub, al)?, fam(&a, &b, al)?));
            }
        }
        for f in finite_omega_builtins() {
            dev = dev.max(ext_gap(standard_f_divergence(&ua, &ub, &f)?, standard_f_divergence(&a, &b, &f)?));
        }
        Ok(dev)
    })?;
    r.prop("transpose_invariance", 1e-8, |rng| {
        let (a, b) = (random_pd(d, rng)?.into_psd(), random_pd(d, rng)?.into_psd());
        let (at, bt) = (a.transpose()?, b.transpose()?);
        let mut dev = 0.0f64;
        for al in alphas() {
            for fam in [renyi, sandwiched_renyi, flat_renyi] {
                dev = dev.max(ext_gap(fam(&at, &bt, al)?, fam(&a, &b, al)?));
            }
        }
        for f in finite_omega_builtins() {
            let x = maximal_f_divergence(&at, &bt.to_pd()?, &f)?;
            dev = dev.max((x - maximal_f_divergence(&a, &b.to_pd()?, &f)?).abs());
        }
        Ok(dev)
    })?;
    r.prop("scaling", 1e-8, |rng| {
        let (a, b) = (random_pd(d, rng)?.into_psd(), random_pd(d, rng)?.into_psd());
        let lam = 0.2 + 3.0 * rng.random::<f64>();
        let (la, lb) = (a.scaled(lam)?, b.scaled(lam)?);
        let mut dev = 0.0f64;
        for al in alphas() {
            for fam in [renyi, sandwiched_renyi, flat_renyi] {
                dev = dev.max(ext_gap(fam(&la, &lb, al)?, fam(&a, &b, al)?));
            }
        }
        for f in finite_omega_builtins() {
            let x = maximal_f_divergence(&la, &lb.to_pd()?, &f)?;
            dev = dev.max((x - lam * maximal_f_divergence(&a, &b.to_pd()?, &f)?).abs());
            let s = standard_f_divergence(&la, &lb, &f)?.scale(1.0 / lam)?;
            dev = dev.max(ext_gap(s, standard_f_divergence(&a, &b, &f)?));
        }
        Ok(dev)
    })?;
    r.prop("commuting_coincidence", 1e-8, |rng| {
        let (a, b) = random_commuting_pair(d, rng)?;
        let mut dev = 0.0f64;
        for al in alphas() {
            let base = renyi(&a, &b, al)?;
            dev = dev.max(ext_gap(base, sandwiched_renyi(&a, &b, al)?));
            dev = dev.max(ext_gap(base, flat_renyi(&a, &b, al)?));
        }
        Ok(dev)
    })?;
    r.prop("maximality", 1e-8, |rng| {
        let rb = rng.random_range(1..=d);
        let b = random_density_of_rank(d, rb, rng)?;
        // A supported inside supp B
        let w = b.support_basis();
        let g = crate::lab::samplers::complex_gaussian(rb, rb, rng);
        let a0 = PsdMatrix::new(HermitianMatrix::symmetrize(&w * &g * g.adjoint() * w.adjoint()))?;
        let a = a0.scaled(1.0 / a0.trace())?;
        let mut dev = 0.0f64;
        for f in finite_omega_builtins() {
            let s = standard_f_divergence(&a, &b, &f)?.finite().unwrap_or(f64::INFINITY);
            dev = dev.max(s - maximal_f_via_mean(&a, &b, &f, &sched)?);
        }
        Ok(dev.max(0.0))
    })?;
    r.prop("three_route_agreement", 1e-6, |rng| {
        let (a, b) = (random_psd(d, rng.random_range(1..=d), rng)?, random_pd(d, rng)?);
        let mut dev = 0.0f64;
        for f in finite_omega_builtins() {
            let direct = maximal_f_divergence(&a, &b, &f)?;
            dev = dev.max((maximal_f_divergence_limit(&a, &b, &f, &sched)? - direct).abs());
            dev = dev.max((maximal_f_via_mean(&a, &b, &f, &sched)? - direct).abs());
        }
        Ok(dev)
    })?;
    r.prop("trace_jensen", 1e-9, |rng| {
        let rho = random_density(d, rng)?;
        let h = random_hermitian(d, rng);
        // shift H into the nonnegative domain of the built-ins
        let shift = (-eig_hermitian(&h)?.min()).max(0.0) + 0.01;
        let h = HermitianMatrix::symmetrize(h.matrix() + crate::linalg::identity(d) * C64::new(shift, 0.0));
        let dh = trace_re(&(rho.matrix() * h.matrix()));
        let mut dev = 0.0f64;
        for f in finite_omega_builtins() {
            let fh = apply_function(&h, |x| f.eval(x))?;
            dev = dev.max(f.eval(dh) - trace_re(&(rho.matrix() * fh.matrix())));
        }
        Ok(dev.max(0.0))
    })?;
    let f = min_test();
    let c = f.minimum().expect("min_test has a minimum");
    r.prop("infimum", 1e-8, |rng| {
        let b = random_pd(d, rng)?;
        let a = random_psd(d, rng.random_range(1..=d), rng)?.scaled(3.0 * rng.random::<f64>())?;
        let lower = c.value * b.trace();
        let at_min = maximal_f_divergence(&b.scaled(c.at)?, &b, &f)?;
        let below = (lower - maximal_f_divergence(&a, &b, &f)?).max(0.0);
        Ok(below.max((at_min - lower).abs()))
    })?;
    r.prop("zero_characterization", 1e-8, |rng| {
        let b = random_density(d, rng)?.into_psd();
        let cm = random_density(d, rng)?;
        let zero = PsdMatrix::zeros(d);
        let mut dev = 0.0f64;
        for f in finite_omega_builtins() {
            let lhs = maximal_f_divergence(&b, &cm, &f)?;
            // D_f(B || 0) = omega(f) tr B
            let rhs = f.omega().finite().expect("finite omega") * b.trace() + maximal_f_divergence(&zero, &cm, &f)?;
            dev = dev.max(lhs - rhs);
        }
        Ok(dev.max(0.0))
    })?;
    Ok(())
}

fn means_suite(r: &mut Runner<'_>) -> Result<()> {
    let d = r.cfg.dim;
    let sched = LimitSchedule::default();
    r.prop("unitary_covariance", 1e-9, |rng| {
        let (a, b) = (random_pd(d, rng)?.into_psd(), random_pd(d, rng)?);
        let u = haar_unitary(d, rng);
        let (ua, ub) = (a.congruence(&u)?, b.congruence(&u)?.to_pd()?);
        let mut dev = 0.0f64;
        for h in [MeanFunction::geometric(), MeanFunction::arithmetic(), MeanFunction::harmonic()] {
            let left = kubo_ando_mean(&b, &a, &h)?.congruence(&u)?;
            dev = dev.max(rel(left.matrix(), kubo_ando_mean(&ub, &ua, &h)?.matrix()));
        }
        dev = dev.max(rel(log_euclidean(&a, &b)?.congruence(&u)?.matrix(), log_euclidean(&ua, &ub)?.matrix()));
        dev = dev.max(rel(log_product(&a, &b)?.congruence(&u)?.matrix(), log_product(&ua, &ub)?.matrix()));
        Ok(dev)
    })?;
    r.prop("monotone_continuity", 1e-9, |rng| {
        let a = random_psd(d, rng.random_range(1..=d), rng)?;
        let b = random_psd(d, rng.random_range(1..=d), rng)?;
        let g = MeanFunction::geometric();
        let big = crate::means::mean_shifted(&b, 1e-2, &a, &g)?;
        let small = crate::means::mean_shifted(&b, 1e-3, &a, &g)?;
        Ok((-eig_hermitian(&HermitianMatrix::symmetrize(big - small))?.min()).max(0.0))
    })?;
    r.prop("sqrt_compatibility", 1e-8, |rng| {
        let (a, b) = random_psd_pair(d, rng)?;
        let left = pseudo_power(&log_product(&a, &b)?, 0.5)?;
        let right = log_product(&pseudo_power(&a, 0.5)?, &pseudo_power(&b, 0.5)?)?;
        Ok(rel(left.matrix(), right.matrix()))
    })?;
    r.prop("log_euclidean_from_product", 1e-8, |rng| {
        let (a, b) = (random_pd(d, rng)?.into_psd(), random_pd(d, rng)?.into_psd());
        let left = log_euclidean(&a, &b)?;
        Ok(rel(left.matrix(), pseudo_power(&log_product(&a, &b)?, 0.5)?.matrix()))
    })?;
    r.prop("geometric_mean_bridge", 1e-9, |rng| {
        let (a, b) = (random_psd(d, rng.random_range(1..=d), rng)?, random_pd(d, rng)?);
        let mean = kubo_ando_mean(&b, &a, &MeanFunction::geometric())?;
        Ok((-mean.trace() - maximal_f_divergence(&a, &b, &opfunc::neg_sqrt())?).abs())
    })?;
    r.prop("symmetry", 1e-9, |rng| {
        let (a, b) = random_psd_pair(d, rng)?;
        let s1 = rel(log_euclidean(&a, &b)?.matrix(), log_euclidean(&b, &a)?.matrix());
        let s2 = rel(log_product(&a, &b)?.matrix(), log_product(&b, &a)?.matrix());
        Ok(s1.max(s2))
    })?;
    r.prop("geometric_limit_symmetry", 1e-6, |rng| {
        let a = random_psd(d, rng.random_range(1..=d), rng)?;
        let b = random_psd(d, rng.random_range(1..=d), rng)?;
        let g = MeanFunction::geometric();
        let x = kubo_ando_mean_limit(&b, &a, &g, &sched)?;
        let y = kubo_ando_mean_limit(&a, &b, &g, &sched)?;
        Ok(rel(x.matrix(), y.matrix()))
    })?;
    Ok(())
}

fn lab_suite(r: &mut Runner<'_>) -> Result<()> {
    let d = r.cfg.dim;
    let trials = r.cfg.trials;
    let seed = r.cfg.seed;
    let mut worst = 0.0f64;
    for &al in &[0.3, 0.5, 0.7, 1.5, 2.0, 3.0] {
        let rep = verify_theorem1(d, al, seed, trials, r.cfg.tol.unwrap_or(1e-8))?;
        worst = worst.max(if rep.meets_expectation() { rep.children[..4].iter().map(|c| c.max_deviation).fold(0.0, f64::max) } else { f64::INFINITY });
    }
    r.record("theorem1", 1e-8, worst);
    let mut worst = 0.0f64;
    for f in [opfunc::neg_sqrt(), opfunc::hellinger(), min_test()] {
        let rep = verify_theorem2(d, &f, seed, trials, r.cfg.tol.unwrap_or(1e-8))?;
        worst = worst.max(if rep.meets_expectation() { rep.children[..2].iter().map(|c| c.max_deviation).fold(0.0, f64::max) } else { f64::INFINITY });
    }
    r.record("theorem2", 1e-8, worst);
    r.prop("trace_exp_monotone", 1e-9, |rng| {
        let a = random_hermitian(d, rng);
        let k = random_psd(d, rng.random_range(1..=d), rng)?;
        let b = &a + k.hermitian();
        let ta = trace_re(expm_hermitian(&a)?.matrix());
        let tb = trace_re(expm_hermitian(&b)?.matrix());
        Ok(((ta - tb) / tb).max(0.0))
    })?;
    r.prop("weyl_monotonicity", 1e-9, |rng| {
        use crate::lab::probes::{NormKind, ScalarMap};
        let s = random_hermitian(d, rng);
        let k = random_psd(d, rng.random_range(1..=d), rng)?;
        let t = &s + k.hermitian();
        let es = eig_hermitian(&s)?;
        let et = eig_hermitian(&t)?;
        let mut dev = 0.0f64;
        for g in [ScalarMap::Exp, ScalarMap::ScaledExp(0.5), ScalarMap::Softplus] {
            let gs: Vec<f64> = es.eigenvalues.iter().map(|&x| g.eval(x)).collect();
            let gt: Vec<f64> = et.eigenvalues.iter().map(|&x| g.eval(x)).collect();
            for n in NormKind::ALL {
                let (ns, nt) = (n.of_singular_values(&gs), n.of_singular_values(&gt));
                dev = dev.max((ns - nt) / nt);
            }
        }
        Ok(dev.max(0.0))
    })?;
    Ok(())
}

pub fn run_suites(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut results = Vec::new();
    for name in SUITES.iter().filter(|s| cfg.suites.iter().any(|c| c == *s)) {
        let mut r = Runner { cfg, suite: name, results: Vec::new(), counter: 0 };
        match *name {
            "linalg" => linalg_suite(&mut r)?,
            "opfunc" => opfunc_suite(&mut r)?,
            "divergences" => divergences_suite(&mut r)?,
            "means" => means_suite(&mut r)?,
            _ => lab_suite(&mut r)?,
        }
        results.extend(r.results);
    }
    let passed = results.iter().all(|r| r.passed);
    Ok(SuiteReport { dim: cfg.dim, seed: cfg.seed, trials: cfg.trials, passed, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass() {
        let cfg = SuiteConfig { trials: 8, ..SuiteConfig::default() };
        let report = run_suites(&cfg).unwrap();
        let failed: Vec<_> = report.results.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(report.results.len() > 25);
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::parse(r#"{"suites":["nope"]}"#).is_err());
        assert!(SuiteConfig::parse(r#"{"dim":1}"#).is_err());
        assert!(SuiteConfig::parse(r#"{"extra":1}"#).is_err());
        let c = SuiteConfig::parse(r#"{"suites":["linalg"],"seed":4}"#).unwrap();
        assert_eq!(c.dim, 3);
        assert_eq!(c.seed, 4);
    }
}
