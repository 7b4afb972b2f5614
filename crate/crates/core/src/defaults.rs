//! Central table of numerical defaults.
//!
//! | name | value | meaning |
//! |------|-------|---------|
//! | [`HERM_TOL`] | 1e-9 | relative asymmetry accepted when building a Hermitian matrix |
//! | [`RECON_TOL`] | 1e-9 | eigen-reconstruction and idempotency tolerance |
//! | [`RANK_REL`] | 1e-10 | eigenvalues below `RANK_REL * max(1, lambda_max)` count as zero |
//! | [`CLIP_REL`] | 1e-10 | negative eigenvalues above `-CLIP_REL * max(1, lambda_max)` are clipped to zero |
//! | [`GROUP_REL`] | 1e-8 | eigenvalues closer than this (relative) share a spectral projection |
//! | [`OVERLAP_TOL`] | 1e-9 | subspace overlap below which supports count as orthogonal / nested |
//! | [`EPS0`], [`EPS_RATIO`] | 1e-2, 0.5 | geometric epsilon schedule for `B + eps I` limits |
//! | [`CONV_TOL`] | 1e-7 | successive-difference stopping tolerance for epsilon limits |
//! | [`MAX_STEPS`] | 40 | epsilon refinements before giving up |
//! | [`TROTTER_MAX_DOUBLINGS`] | 20 | Lie-Trotter runs `n = 1, 2, 4, ..., 2^20` |
//! | [`TROTTER_CONV_TOL`] | 1e-9 | relative spectral-norm stopping tolerance for the Trotter sequence |
//! | [`QUAD_NODES`] | 400 | quadrature nodes for measure integrals |
//! | [`QUAD_S_MIN`], [`QUAD_S_MAX`] | 1e-8, 1e8 | quadrature range in `s` |
//! | [`PD_SHIFT`] | 1e-3 | shift added by the positive-definite sampler |
//! | [`ORDER_TOL`] | 1e-10 | default tolerance of the order predicates |
//! | [`PROBE_T_GRID`] | 1 .. 1e4 | rank-one exponential family parameters |

pub const HERM_TOL: f64 = 1e-9;
pub const RECON_TOL: f64 = 1e-9;
pub const RANK_REL: f64 = 1e-10;
pub const CLIP_REL: f64 = 1e-10;
pub const GROUP_REL: f64 = 1e-8;
pub const OVERLAP_TOL: f64 = 1e-9;

pub const EPS0: f64 = 1e-2;
pub const EPS_RATIO: f64 = 0.5;
pub const CONV_TOL: f64 = 1e-7;
pub const MAX_STEPS: usize = 40;

pub const TROTTER_MAX_DOUBLINGS: u32 = 20;
pub const TROTTER_CONV_TOL: f64 = 1e-9;

pub const QUAD_NODES: usize = 400;
pub const QUAD_S_MIN: f64 = 1e-8;
pub const QUAD_S_MAX: f64 = 1e8;

pub const PD_SHIFT: f64 = 1e-3;
pub const ORDER_TOL: f64 = 1e-10;

pub const PROBE_T_GRID: [f64; 5] = [1.0, 10.0, 100.0, 1000.0, 10000.0];

/// Base trials and local refinements used by violation searches.
pub const SEARCH_BASE_TRIALS: usize = 100;
pub const SEARCH_REFINEMENTS: usize = 100;
