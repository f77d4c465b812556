//! Finite time-homogeneous Markov chains.
//!
//! A validated [`TransitionMatrix`] is split by [`decompose`] into recurrent
//! classes (closed strongly connected components of the support graph) and
//! transient states. The decomposition also carries the Cesàro limit `P̄` and
//! the limit `Δ = lim P^{δk}` where `δ` is the lcm of the class periods.

mod chain;
mod decompose;
mod io;
mod limits;
mod transition;

pub(crate) use chain::chain_noise_stream;
pub use chain::{sample_index, ChainState};
pub use decompose::{decompose, ChainDecomposition};
pub use io::{parse_distribution, parse_matrix, read_distribution, read_matrix, DecompositionReport};
pub use limits::{
    cesaro_limit, cesaro_limit_oracle, limiting_distribution, matrix_power, power_limit,
    validate_distribution, POWER_LIMIT_MAX_SQUARINGS,
};
pub use transition::TransitionMatrix;

/// Row-sum and distribution tolerance.
pub const STOCHASTIC_TOL: f64 = 1e-12;
/// Entrywise tolerance for the `Δ` fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-12;

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
