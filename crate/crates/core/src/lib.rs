//! Markovian incremental stochastic subgradient optimization.
//!
//! The crate is split along the lines of the method:
//!
//! - [`markov`]: validation, structural decomposition and limit matrices of
//!   finite time-homogeneous Markov chains, plus seeded trajectory sampling.
//! - [`problem`]: weighted sums of convex components over a box, noise models
//!   and the chain-induced component weights.
//! - [`optimizer`]: the incremental iteration driven by several Markov chains
//!   whose subiterations are averaged and projected.
//! - [`experiment`]: the sparse l1 residual study, its baselines, seeded
//!   suites and the power-decay diagnostic.
//!
//! States are 0-based in memory. Everything that crosses a file or CLI
//! boundary is 1-based.

pub mod error;
pub mod experiment;
pub mod markov;
pub mod optimizer;
pub mod problem;

pub use error::{Error, Result};
