//! Exact-arithmetic toolkit for generalized cluster structures.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is computed over
//! arbitrary-precision rationals; there is no floating point anywhere.
//!
//! Layout:
//! - [`exact`]: rationals, gradient scalars, dense matrices, sparse
//!   polynomials, the function DAG and randomized identity testing.
//! - [`engine`]: quivers with multiplicities, exchange strings, seeds and
//!   generalized mutation.
//! - [`double`]: the staircase matrix and the initial seed on `D(GL_n)`.
//! - [`poisson`]: the Poisson-Lie bracket in matrix entries and the
//!   log-canonicity / compatibility / toric weight checks.
//! - [`completeness`]: elimination certificates, the first-row system and the
//!   fixed mutation sequence on the `n = 4` seed.
//! - [`band`]: periodic band matrices and their seed.
//! - [`charge`]: the three-parameter charge dynamics and reachability search.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod band;
pub mod charge;
pub mod completeness;
pub mod double;
pub mod engine;
pub mod error;
pub mod exact;
pub mod poisson;

pub use error::Error;
pub use exact::{Coord, ExactMatrix, GradScalar, Point, RegularFunction, SparsePolynomial, Tag, Q};

/// Deterministic random source used by every sampling routine.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Build the crate's RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
