//! Seeded random matrices.
//!
//! Every trial gets its own ChaCha stream (`seed`, stream = trial index), so
//! results do not depend on how trials are scheduled across threads.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::defaults;
use crate::error::Result;
use crate::linalg::{identity, ComplexMatrix, HermitianMatrix, PdMatrix, PsdMatrix, C64};

pub type LabRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Seed for the `k`-th sub-experiment of a run.
pub fn child_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k.wrapping_mul(0xBF58_476D_1CE4_E5B9)).rotate_left(17)
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix with i.i.d. standard complex Gaussian entries (variance 1/2 per part).
pub fn complex_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(s * gaussian(rng), s * gaussian(rng)))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
/// `diag R` moved into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let qr = complex_gaussian(dim, dim, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniformly distributed unit vector.
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> DVector<C64> {
    let v = complex_gaussian(dim, 1, rng).column(0).into_owned();
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Random Hermitian matrix `(G + G^dagger) / 2` with Gaussian `G`.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let g = complex_gaussian(dim, dim, rng);
    HermitianMatrix::symmetrize((&g + g.adjoint()) * C64::new(0.5, 0.0))
}

/// `G G^dagger / dim` with `G` of size `dim x rank`.
pub fn random_psd(dim: usize, rank: usize, rng: &mut impl Rng) -> Result<PsdMatrix> {
    let g = complex_gaussian(dim, rank, rng);
    PsdMatrix::new(HermitianMatrix::symmetrize(&g * g.adjoint() * C64::new(1.0 / dim as f64, 0.0)))
}

/// Full-rank sample plus `PD_SHIFT * I`.
pub fn random_pd(dim: usize, rng: &mut impl Rng) -> Result<PdMatrix> {
    let g = complex_gaussian(dim, dim, rng);
    let m = &g * g.adjoint() * C64::new(1.0 / dim as f64, 0.0) + identity(dim) * C64::new(defaults::PD_SHIFT, 0.0);
    PdMatrix::new(PsdMatrix::new(HermitianMatrix::symmetrize(m))?)
}

/// Trace-one positive definite sample.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> Result<PdMatrix> {
    let a = random_pd(dim, rng)?;
    let t = a.trace();
    PdMatrix::new(a.scaled(1.0 / t)?)
}

/// Trace-one PSD sample of the given rank.
pub fn random_density_of_rank(dim: usize, rank: usize, rng: &mut impl Rng) -> Result<PsdMatrix> {
    let a = random_psd(dim, rank, rng)?;
    let t = a.trace();
    a.scaled(1.0 / t)
}

/// Kraus operators of a random channel: a Haar isometry `C^d -> C^{d m}` cut
/// into `m` blocks of `d` rows.
pub fn random_channel(dim: usize, kraus: usize, rng: &mut impl Rng) -> Vec<ComplexMatrix> {
    let u = haar_unitary(dim * kraus, rng);
    (0..kraus).map(|k| u.view((k * dim, 0), (dim, dim)).into_owned()).collect()
}

fn sparse_spectrum(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..dim).map(|_| if rng.random::<f64>() < 0.25 { 0.0 } else { 0.05 + rng.random::<f64>() }).collect()
}

/// Pair `U diag(a) U^dagger`, `U diag(b) U^dagger`; each entry of `a`, `b` is
/// zero with probability 1/4 (`a` keeps at least one positive entry).
pub fn random_commuting_pair(dim: usize, rng: &mut impl Rng) -> Result<(PsdMatrix, PsdMatrix)> {
    let u = haar_unitary(dim, rng);
    let mut a = sparse_spectrum(dim, rng);
    if a.iter().all(|&x| x == 0.0) {
        a[0] = 0.5;
    }
    let b = sparse_spectrum(dim, rng);
    let build = |d: &[f64]| PsdMatrix::from_spectrum(d.to_vec(), u.clone());
    Ok((build(&a)?, build(&b)?))
}
