//! Exact harmonic analysis on the symmetric group `S_n` and the alternating
//! group `A_n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`partitions`]: partitions, Young diagram combinatorics, level and dimension.
//! * [`classes`]: cycle types, class sizes and exact class functions.
//! * [`characters`]: a memoized Murnaghan–Nakayama engine and Young's branching rule.
//! * [`harmonic`]: character norms, Fourier expansions, convolution, Kronecker
//!   coefficients and globalness certificates.
//! * [`bounds`]: evaluators and exact verifiers for character bounds, plus
//!   constant-fitting sweeps.
//! * [`mixing`]: spectral mixing analysis of normal random walks.
//! * [`lock`]: the regression lock for fitted constants.
//!
//! All quantities that can be computed exactly are computed with big integers
//! and rationals; floats only appear when a formula involves irrational powers
//! or logarithms.

pub mod bounds;
pub mod characters;
pub mod classes;
mod error;
pub mod exact;
pub mod harmonic;
pub mod lock;
pub mod mixing;
pub mod partitions;
pub mod perm;

pub use characters::{CharacterEvaluator, CharacterTable};
pub use classes::{ClassFunction, ClassSpace, CycleType, Group, Parity};
pub use error::{Error, Result};
pub use harmonic::FourierExpansion;
pub use mixing::MixingProfile;
pub use partitions::Partition;

pub use bounds::BoundReport;

/// Default seed for every sampled sweep.
pub const DEFAULT_SEED: u64 = 0x5EED;
