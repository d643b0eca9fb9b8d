//! Dense complex linear algebra and detector-construction tooling for a
//! two-slit spin-7/2 model.
//!
//! The crate builds a bundled reference scenario in which three pairwise
//! commuting spin projectors act as detectors for three mutually
//! incompatible spatial projectors on an entangled state, and provides:
//!
//! - [`linalg`] — a dense complex kernel (products, tensor products,
//!   commutators, orthogonalization, Hermitian eigendecomposition),
//! - [`spin`] — spin-j operator algebra (ladder operators, eigenprojectors,
//!   subset projectors),
//! - [`scenario`] — the bundled scenario in `literal` and `repaired`
//!   variants, including the three-stage entanglement preparation pipeline,
//! - [`audit`] — numerical evaluation of the detector conditions C.1–C.10
//!   plus structural consistency checks on the bundled data,
//! - [`solver`] — re-derivation of valid property/detector triples from a
//!   state and spin subsets, with exhaustive enumeration at small dimension,
//! - [`simulate`] — exact joint outcome distributions and reproducible
//!   Monte Carlo sampling.
//!
//! All dimensions are tiny (at most 80), so everything is dense and exact
//! audits are cheap.

pub mod audit;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod rng;
pub mod scenario;
pub mod simulate;
pub mod solver;
pub mod spin;
pub mod tolerance;

pub use error::Error;
pub use linalg::{CompositeSpace, Operator, Space, StateVector, C64};
pub use tolerance::ToleranceConfig;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
