//! Quantum Rényi-type relative entropies, quantum f-divergences and operator
//! means on finite-dimensional positive semidefinite matrices.
//!
//! - [`linalg`]: Hermitian matrix engine (spectra, pseudo-functions, supports, orders).
//! - [`opfunc`]: operator convex functions and their integral representation.
//! - [`divergences`]: conventional, sandwiched and log-Euclidean ("flat") Rényi
//!   divergences; Csiszár, standard, quasi and maximal f-divergences.
//! - [`means`]: Kubo-Ando means, the Log-Euclidean mean and the logarithmic product.
//! - [`lab`]: randomized samplers and executable checks of the preserver results.
//! - [`suite`]: invariant suites run by the CLI.

pub mod defaults;
pub mod divergences;
pub mod error;
pub mod ext;
pub mod json;
pub mod lab;
pub mod limits;
pub mod linalg;
pub mod means;
pub mod opfunc;
pub mod suite;

pub use error::{Error, Result};
pub use ext::ExtendedReal;
pub use json::MatrixJson;
pub use divergences::{QuasiEntropyInstance, RenyiParameter};
pub use limits::LimitSchedule;
pub use linalg::{ComplexMatrix, HermitianMatrix, PdMatrix, Projection, PsdMatrix, SpectralDecomposition, C64};
pub use means::MeanFunction;
pub use opfunc::OperatorConvexFunction;
