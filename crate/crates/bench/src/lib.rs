//! Seeded inputs shared by the benchmarks.

use qdiv_core::lab::samplers::{random_density, random_psd, seeded};
use qdiv_core::{PdMatrix, PsdMatrix};

/// Density matrix `A` of full rank and positive definite density `B`.
pub fn density_pair(dim: usize, seed: u64) -> (PsdMatrix, PdMatrix) {
    let mut rng = seeded(seed);
    let a = random_density(dim, &mut rng).expect("sampler").into_psd();
    let b = random_density(dim, &mut rng).expect("sampler");
    (a, b)
}

/// PSD pair with ranks `dim - 1` and `dim / 2`.
pub fn singular_pair(dim: usize, seed: u64) -> (PsdMatrix, PsdMatrix) {
    let mut rng = seeded(seed);
    let a = random_psd(dim, dim - 1, &mut rng).expect("sampler");
    let b = random_psd(dim, (dim / 2).max(1), &mut rng).expect("sampler");
    (a, b)
}
