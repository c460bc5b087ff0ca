//! Exact-arithmetic laboratory for Schur-type partition functions.
//!
//! The crate builds the generating functions for partitions with gap and
//! congruence conditions as truncated big-integer power series, checks the
//! classical identities relating them against independent brute-force
//! enumeration, reproduces two-term Bessel asymptotics for the coefficients,
//! and realizes the universal mock theta function as a conditional
//! probability in an infinite independent-event model, both exactly and by
//! seeded Monte Carlo.
//!
//! Layout:
//! - [`qseries`]: the exact truncated series ring, Pochhammer/eta/theta
//!   builders, numeric evaluation with tail bounds
//! - [`partitions`]: enumeration oracles (ground truth for everything else)
//! - [`identities`]: generating functions and identity verifiers
//! - [`asymptotics`]: Bessel estimates, asymptotic constants, convergence and
//!   crossover scans
//! - [`probability`]: the independent-event model, exact conditional
//!   probabilities, and the Monte Carlo simulator
//! - [`suite`]: the one-shot verification matrix used by `schurq verify-all`

pub mod asymptotics;
pub mod error;
pub mod identities;
pub mod partitions;
pub mod probability;
pub mod qseries;
pub mod suite;

pub use error::{Error, Result};
pub use partitions::SchurParams;
