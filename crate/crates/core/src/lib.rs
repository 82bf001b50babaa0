//! Multinomial and Bernstein probabilities on the d-dimensional simplex.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: log-gamma, polygamma and related identities.
//! * [`simplex`]: simplex points, multi-index lattices, multinomial pmf, Dirichlet sampling.
//! * [`monotone`]: the Γ-ratio function `g(a)`, derivatives of `-ln g`, and complete-monotonicity scans.
//! * [`ineq`]: generalized multinomial coefficients and their log-convexity inequalities.
//! * [`spoly`]: the `S_{r,s,m}` polynomial family, its Gaussian limit and exact integrals.
//! * [`estimate`]: empirical and Bernstein cdf/density estimators.
//!
//! Everything numerical works in log space and is deterministic given a seed.

pub mod error;
pub mod estimate;
pub mod ineq;
pub mod monotone;
pub mod report;
pub mod sample;
pub mod simplex;
pub mod specfun;
pub mod spoly;
pub mod sum;

pub use error::{Error, Result};
pub use sample::{Domain, SampleSet};
pub use simplex::{MultiIndex, SimplexPoint, WeightVector};

/// Seedable generator used by every sampler in the crate.
///
/// ChaCha with 8 rounds: 64-bit seeds via `seed_from_u64`, and independent
/// streams via `set_stream`, so parallel trials get reproducible sub-sequences.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the generator for stream `stream` of master seed `seed`.
pub fn rng_for(seed: u64, stream: u64) -> SeededRng {
    use rand::SeedableRng;
    let mut rng = SeededRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
