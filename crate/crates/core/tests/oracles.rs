mod common;

use common::*;
use qdiv_core::divergences::{
    flat_renyi, maximal_f_divergence, maximal_f_divergence_limit, maximal_f_via_mean, quasi_entropy, renyi,
    sandwiched_renyi, standard_f_divergence,
};
use qdiv_core::lab::samplers::{haar_unitary, random_density, random_pd, random_psd, random_unit_vector, seeded};
use qdiv_core::means::{kubo_ando_mean, log_euclidean, log_product, log_product_trotter, MeanFunction, TrotterSchedule};
use qdiv_core::opfunc::{finite_omega_builtins, hellinger, neg_sqrt};
use qdiv_core::{ComplexMatrix, ExtendedReal, LimitSchedule, PdMatrix, PsdMatrix, QuasiEntropyInstance, RenyiParameter, C64};

const CUT: f64 = 1e-12;

fn alpha(a: f64) -> RenyiParameter {
    RenyiParameter::new(a).unwrap()
}

fn fin(x: ExtendedReal) -> f64 {
    x.finite().expect("finite value")
}

fn psd(m: ComplexMatrix) -> PsdMatrix {
    PsdMatrix::from_matrix(m).unwrap()
}

fn renyi_oracle(a: &ComplexMatrix, b: &ComplexMatrix, al: f64) -> f64 {
    let t = trace(&(pseudo_pow(a, al, CUT) * pseudo_pow(b, 1.0 - al, CUT)));
    (t / trace(a)).ln() / (al - 1.0)
}

fn sandwiched_oracle(a: &ComplexMatrix, b: &ComplexMatrix, al: f64) -> f64 {
    let s = pseudo_pow(b, (1.0 - al) / (2.0 * al), CUT);
    let inner = herm(&s * a * &s);
    let t: f64 = herm_eigenvalues(&inner).iter().map(|l| l.max(0.0).powf(al)).sum();
    (t / trace(a)).ln() / (al - 1.0)
}

/// Positive definite pairs only: `(tr A)^{-1} tr exp(al log A + (1 - al) log B)`.
fn flat_oracle(a: &ComplexMatrix, b: &ComplexMatrix, al: f64) -> f64 {
    let m = herm_fn(a, f64::ln) * C64::new(al, 0.0) + herm_fn(b, f64::ln) * C64::new(1.0 - al, 0.0);
    let t = trace(&herm_fn(&herm(m), f64::exp));
    (t / trace(a)).ln() / (al - 1.0)
}

fn maximal_oracle(a: &ComplexMatrix, b: &ComplexMatrix, f: impl Fn(f64) -> f64) -> f64 {
    let (h, ih) = (pseudo_pow(b, 0.5, 0.0), pseudo_pow(b, -0.5, 0.0));
    let inner = herm(&ih * a * &ih);
    trace(&(&h * herm_fn(&inner, |l| f(if l > CUT { l } else { 0.0 })) * &h))
}

#[test]
fn sandwiched_noncommuting_example() {
    let a = from_real(2, &[0.5, 0.5, 0.5, 0.5]);
    let b = from_real(2, &[2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0]);
    let got = fin(sandwiched_renyi(&psd(a.clone()), &psd(b.clone()), alpha(2.0)).unwrap());
    // A = xx* with x = (1,1)/sqrt2, so the trace is (x* B^{-1/2} x)^2
    let closed = ((1.5f64.sqrt() + 3f64.sqrt()) / 2.0).powi(2).ln();
    assert!((got - closed).abs() < 1e-13, "{got} vs {closed}");
    assert!((got - sandwiched_oracle(&a, &b, 2.0)).abs() < 1e-12);
    let petz = fin(renyi(&psd(a), &psd(b), alpha(2.0)).unwrap());
    assert!((petz - 2.25f64.ln()).abs() < 1e-13);
    assert!(got <= petz);
}

#[test]
fn renyi_families_match_jacobi_oracle() {
    let mut rng = seeded(41);
    for dim in 2..=4 {
        for _ in 0..5 {
            let a = random_pd(dim, &mut rng).unwrap();
            let b = random_pd(dim, &mut rng).unwrap();
            for al in [0.3, 0.5, 2.0, 3.0] {
                let (am, bm) = (a.matrix(), b.matrix());
                let r = fin(renyi(&a, &b, alpha(al)).unwrap());
                let s = fin(sandwiched_renyi(&a, &b, alpha(al)).unwrap());
                let f = fin(flat_renyi(&a, &b, alpha(al)).unwrap());
                assert!((r - renyi_oracle(am, bm, al)).abs() < 1e-9, "renyi d={dim} a={al}");
                assert!((s - sandwiched_oracle(am, bm, al)).abs() < 1e-9, "sandwiched d={dim} a={al}");
                assert!((f - flat_oracle(am, bm, al)).abs() < 1e-9, "flat d={dim} a={al}");
                // flat <= sandwiched <= renyi for alpha > 1, reversed flat >= ... never assumed for alpha < 1
                if al > 1.0 {
                    assert!(f <= s + 1e-9 && s <= r + 1e-9, "ordering d={dim} a={al}");
                }
            }
        }
    }
}

#[test]
fn renyi_with_rank_deficient_first_argument() {
    let mut rng = seeded(5);
    let a = random_psd(3, 2, &mut rng).unwrap();
    let b = random_pd(3, &mut rng).unwrap();
    for al in [0.5, 2.0] {
        let r = fin(renyi(&a, &b, alpha(al)).unwrap());
        assert!((r - renyi_oracle(a.matrix(), b.matrix(), al)).abs() < 1e-9);
        let s = fin(sandwiched_renyi(&a, &b, alpha(al)).unwrap());
        assert!((s - sandwiched_oracle(a.matrix(), b.matrix(), al)).abs() < 1e-9);
    }
}

#[test]
fn flat_renyi_of_rank_one_state() {
    let mut rng = seeded(8);
    for _ in 0..5 {
        let x = random_unit_vector(3, &mut rng);
        let a = psd(&x * x.adjoint());
        let b = random_pd(3, &mut rng).unwrap();
        let log_b = herm_fn(b.matrix(), f64::ln);
        let expected = -(x.adjoint() * &log_b * &x)[(0, 0)].re;
        for al in [0.5, 2.0, 3.0] {
            let got = fin(flat_renyi(&a, &b, alpha(al)).unwrap());
            assert!((got - expected).abs() < 1e-9, "alpha {al}: {got} vs {expected}");
        }
    }
}

#[test]
fn quasi_entropy_matches_superoperator() {
    let mut rng = seeded(13);
    for dim in 2..=3 {
        for f in finite_omega_builtins() {
            let a = random_psd(dim, dim, &mut rng).unwrap();
            let b = random_pd(dim, &mut rng).unwrap();
            let k = haar_unitary(dim, &mut rng);
            // X -> A X B^{-1} as a d^2 x d^2 Hermitian matrix
            let b_inv = pseudo_pow(b.matrix(), -1.0, 0.0);
            let s = herm(kron(a.matrix(), &b_inv.transpose()));
            let fs = herm_fn(&s, |l| f.eval(l.max(0.0)));
            let y = vec_rows(&(&k * pseudo_pow(b.matrix(), 0.5, 0.0)));
            let yv = nalgebra::DVector::from_vec(y);
            let oracle = (yv.adjoint() * &fs * &yv)[(0, 0)].re;
            let inst = QuasiEntropyInstance::new(a.clone(), b.clone(), k, f.clone()).unwrap();
            assert!((quasi_entropy(&inst) - oracle).abs() < 1e-9, "{} d={dim}", f.name());
            // K = I reproduces the standard divergence
            let id = QuasiEntropyInstance::new(a.clone(), b.clone(), ComplexMatrix::identity(dim, dim), f.clone()).unwrap();
            let std = fin(standard_f_divergence(&a, b.psd(), &f).unwrap());
            assert!((quasi_entropy(&id) - std).abs() < 1e-9);
        }
    }
}

#[test]
fn maximal_routes_match_oracle() {
    let mut rng = seeded(21);
    let sched = LimitSchedule::default();
    for dim in 2..=4 {
        for f in finite_omega_builtins() {
            let a = random_psd(dim, 1 + dim / 2, &mut rng).unwrap();
            let b = random_pd(dim, &mut rng).unwrap();
            let oracle = maximal_oracle(a.matrix(), b.matrix(), |t| f.eval(t));
            let direct = maximal_f_divergence(&a, &b, &f).unwrap();
            assert!((direct - oracle).abs() < 1e-9, "{} d={dim} {:e}", f.name(), direct - oracle);
            assert!((maximal_f_divergence_limit(&a, b.psd(), &f, &sched).unwrap() - oracle).abs() < 1e-6);
            assert!((maximal_f_via_mean(&a, b.psd(), &f, &sched).unwrap() - oracle).abs() < 1e-9);
        }
    }
}

#[test]
fn maximal_documented_values() {
    let eye = PdMatrix::from_diag(&[1.0, 1.0]).unwrap();
    assert!((maximal_f_divergence(eye.psd(), &eye, &neg_sqrt()).unwrap() + 2.0).abs() < 1e-14);
    let a = PsdMatrix::from_diag(&[4.0, 1.0]).unwrap();
    assert!((maximal_f_divergence(&a, &eye, &neg_sqrt()).unwrap() + 3.0).abs() < 1e-14);
    assert!((maximal_f_divergence(&a, &eye, &hellinger()).unwrap() - 1.0).abs() < 1e-14);
    let sched = LimitSchedule::default();
    let e1 = PsdMatrix::from_diag(&[1.0, 0.0]).unwrap();
    let e2 = PsdMatrix::from_diag(&[0.0, 1.0]).unwrap();
    assert!(maximal_f_divergence_limit(&e1, &e2, &neg_sqrt(), &sched).unwrap().abs() < 1e-6);
    assert!(maximal_f_via_mean(&e1, &e2, &neg_sqrt(), &sched).unwrap().abs() < 1e-12);
    let zero = PsdMatrix::zeros(2);
    for f in finite_omega_builtins() {
        let omega = f.omega().finite().unwrap();
        assert!((maximal_f_via_mean(&a, &zero, &f, &sched).unwrap() - omega * 5.0).abs() < 1e-12, "{}", f.name());
    }
}

#[test]
fn geometric_mean_identity_against_oracle() {
    let mut rng = seeded(34);
    for _ in 0..10 {
        let a = random_psd(5, 3, &mut rng).unwrap();
        let b = random_pd(5, &mut rng).unwrap();
        let mean = kubo_ando_mean(&b, &a, &MeanFunction::geometric()).unwrap();
        let (h, ih) = (pseudo_pow(b.matrix(), 0.5, 0.0), pseudo_pow(b.matrix(), -0.5, 0.0));
        let oracle = &h * herm_fn(&herm(&ih * a.matrix() * &ih), |l| if l > CUT { l.sqrt() } else { 0.0 }) * &h;
        assert!(max_abs(&(mean.matrix() - &oracle)) < 1e-9, "{:e}", max_abs(&(mean.matrix() - &oracle)));
        let d = maximal_f_divergence(&a, &b, &neg_sqrt()).unwrap();
        assert!((d + trace(&oracle)).abs() < 1e-9);
    }
}

#[test]
fn log_product_and_mean_on_pd_pairs() {
    let mut rng = seeded(55);
    for _ in 0..5 {
        let a = random_density(3, &mut rng).unwrap();
        let b = random_pd(3, &mut rng).unwrap();
        let sum = herm_fn(a.matrix(), f64::ln) + herm_fn(b.matrix(), f64::ln);
        let prod = herm_fn(&herm(sum.clone()), f64::exp);
        let half = herm_fn(&herm(sum * C64::new(0.5, 0.0)), f64::exp);
        assert!(max_abs(&(log_product(&a, &b).unwrap().matrix() - &prod)) < 1e-9);
        assert!(max_abs(&(log_euclidean(&a, &b).unwrap().matrix() - &half)) < 1e-9);
        let trotter = log_product_trotter(&a, &b, &TrotterSchedule::default()).unwrap();
        assert!(max_abs(&(trotter.matrix() - &prod)) < 1e-6);
    }
}

#[test]
fn jacobi_oracle_sanity() {
    let mut rng = seeded(1);
    let a = random_pd(4, &mut rng).unwrap();
    let rebuilt = herm_fn(a.matrix(), |l| l);
    assert!(max_abs(&(rebuilt - a.matrix())) < 1e-12);
    let sq = pseudo_pow(a.matrix(), 0.5, 0.0);
    assert!(max_abs(&(&sq * &sq - a.matrix())) < 1e-12);
}
