//! Simulation and verification laboratory for Gumbel last passage
//! percolation, the log-gamma directed polymer, N multi-edge LPP and the
//! Markovian corner-growth process built on it.

pub mod asymptotics;
pub mod error;
pub mod experiments;
pub mod growth;
pub mod lattice;
pub mod rng;
pub mod stats;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
