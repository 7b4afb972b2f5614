use proptest::prelude::*;

use qdiv_core::divergences::{
    flat_renyi, maximal_f_divergence, q_flat, renyi, sandwiched_renyi, standard_f_divergence,
};
use qdiv_core::lab::samplers::{haar_unitary, random_commuting_pair, random_density, random_pd, random_psd, seeded};
use qdiv_core::linalg::{max_abs, pseudo_power};
use qdiv_core::means::{kubo_ando_mean_limit, log_euclidean, log_product, MeanFunction};
use qdiv_core::opfunc::finite_omega_builtins;
use qdiv_core::{ExtendedReal, LimitSchedule, MatrixJson, PsdMatrix, RenyiParameter};

fn alphas() -> impl Strategy<Value = f64> {
    prop_oneof![0.15..0.95f64, 1.05..4.0f64]
}

fn same(x: ExtendedReal, y: ExtendedReal, tol: f64) -> bool {
    match (x.finite(), y.finite()) {
        (Some(a), Some(b)) => (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())),
        _ => x == y,
    }
}

fn pair(dim: usize, ranks: (usize, usize), seed: u64) -> (PsdMatrix, PsdMatrix) {
    let mut rng = seeded(seed);
    let a = random_psd(dim, ranks.0.min(dim), &mut rng).unwrap();
    let b = random_psd(dim, ranks.1.min(dim), &mut rng).unwrap();
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn renyi_families_unitarily_invariant(dim in 2usize..5, ra in 1usize..5, rb in 1usize..5, seed: u64, al in alphas()) {
        let (a, b) = pair(dim, (ra, rb), seed);
        let u = haar_unitary(dim, &mut seeded(seed ^ 0x5a5a));
        let (ua, ub) = (a.congruence(&u).unwrap(), b.congruence(&u).unwrap());
        let al = RenyiParameter::new(al).unwrap();
        for fam in [renyi, sandwiched_renyi, flat_renyi] {
            let (x, y) = (fam(&a, &b, al).unwrap(), fam(&ua, &ub, al).unwrap());
            prop_assert!(same(x, y, 1e-8), "{x} vs {y}");
        }
    }

    #[test]
    fn renyi_families_scale_and_transpose_invariant(dim in 2usize..5, seed: u64, al in alphas(), lam in 0.1..10.0f64) {
        let mut rng = seeded(seed);
        let a = random_pd(dim, &mut rng).unwrap().into_psd();
        let b = random_pd(dim, &mut rng).unwrap().into_psd();
        let al = RenyiParameter::new(al).unwrap();
        for fam in [renyi, sandwiched_renyi, flat_renyi] {
            let base = fam(&a, &b, al).unwrap();
            prop_assert!(same(base, fam(&a.scaled(lam).unwrap(), &b.scaled(lam).unwrap(), al).unwrap(), 1e-8));
            prop_assert!(same(base, fam(&a.transpose().unwrap(), &b.transpose().unwrap(), al).unwrap(), 1e-8));
        }
    }

    #[test]
    fn commuting_pairs_make_families_coincide(dim in 2usize..6, seed: u64, al in alphas()) {
        let (a, b) = random_commuting_pair(dim, &mut seeded(seed)).unwrap();
        let al = RenyiParameter::new(al).unwrap();
        let r = renyi(&a, &b, al).unwrap();
        prop_assert!(same(r, sandwiched_renyi(&a, &b, al).unwrap(), 1e-8));
        prop_assert!(same(r, flat_renyi(&a, &b, al).unwrap(), 1e-8));
    }

    #[test]
    fn self_divergence_vanishes(dim in 1usize..5, rank in 1usize..5, seed: u64, al in alphas()) {
        let a = random_psd(dim, rank.min(dim), &mut seeded(seed)).unwrap();
        let al = RenyiParameter::new(al).unwrap();
        for fam in [renyi, sandwiched_renyi, flat_renyi] {
            prop_assert!(fam(&a, &a, al).unwrap().finite().unwrap().abs() < 1e-9);
        }
        prop_assert!((q_flat(&a, &a, al).unwrap().finite().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn f_divergences_positively_homogeneous(dim in 2usize..5, seed: u64, lam in 0.1..10.0f64) {
        let mut rng = seeded(seed);
        let a = random_psd(dim, dim - 1, &mut rng).unwrap();
        let b = random_pd(dim, &mut rng).unwrap();
        let (la, lb) = (a.scaled(lam).unwrap(), b.scaled(lam).unwrap().to_pd().unwrap());
        for f in finite_omega_builtins() {
            let m = maximal_f_divergence(&a, &b, &f).unwrap();
            prop_assert!((maximal_f_divergence(&la, &lb, &f).unwrap() - lam * m).abs() < 1e-8 * (1.0 + lam * m.abs()));
            let s = standard_f_divergence(&a, b.psd(), &f).unwrap().finite().unwrap();
            let ls = standard_f_divergence(&la, lb.psd(), &f).unwrap().finite().unwrap();
            prop_assert!((ls - lam * s).abs() < 1e-8 * (1.0 + lam * s.abs()));
        }
    }

    #[test]
    fn standard_below_maximal(dim in 2usize..5, seed: u64) {
        let mut rng = seeded(seed);
        let a = random_density(dim, &mut rng).unwrap().into_psd();
        let b = random_density(dim, &mut rng).unwrap();
        for f in finite_omega_builtins() {
            let s = standard_f_divergence(&a, b.psd(), &f).unwrap().finite().unwrap();
            prop_assert!(s <= maximal_f_divergence(&a, &b, &f).unwrap() + 1e-8, "{}", f.name());
        }
    }

    #[test]
    fn log_product_algebra(dim in 2usize..5, ra in 1usize..5, rb in 1usize..5, seed: u64) {
        let (a, b) = pair(dim, (ra, rb), seed);
        let ab = log_product(&a, &b).unwrap();
        prop_assert!(max_abs(&(ab.matrix() - log_product(&b, &a).unwrap().matrix())) < 1e-9);
        let root = pseudo_power(&ab, 0.5).unwrap();
        let roots = log_product(&pseudo_power(&a, 0.5).unwrap(), &pseudo_power(&b, 0.5).unwrap()).unwrap();
        prop_assert!(max_abs(&(root.matrix() - roots.matrix())) < 1e-8);
        prop_assert!(max_abs(&(log_euclidean(&a, &a).unwrap().matrix() - a.matrix())) < 1e-9);
    }

    #[test]
    fn geometric_limit_is_symmetric(dim in 2usize..5, ra in 1usize..5, rb in 1usize..5, seed: u64) {
        let (a, b) = pair(dim, (ra, rb), seed);
        let g = MeanFunction::geometric();
        let s = LimitSchedule::default();
        let x = kubo_ando_mean_limit(&a, &b, &g, &s).unwrap();
        let y = kubo_ando_mean_limit(&b, &a, &g, &s).unwrap();
        prop_assert!(max_abs(&(x.matrix() - y.matrix())) < 1e-8 * (1.0 + max_abs(x.matrix())));
    }

    #[test]
    fn matrix_json_round_trips(dim in 1usize..5, seed: u64) {
        let a = random_psd(dim, dim, &mut seeded(seed)).unwrap();
        let json = MatrixJson::from_matrix(a.matrix());
        let text = json.to_json();
        let back = MatrixJson::parse(&text).unwrap();
        prop_assert_eq!(&back, &json);
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back.to_matrix().unwrap(), a.matrix().clone());
    }
}
