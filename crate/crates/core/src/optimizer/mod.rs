//! The Markovian incremental iteration.
//!
//! At iteration `k` every chain `ℓ` moves to `s_ℓ(k+1)` and takes a noisy
//! subgradient step on component `s_ℓ(k+1)` from the shared iterate `x^k`.
//! The subiterations are averaged and projected onto the box to give
//! `x^{k+1}`. With a single chain this is the plain incremental method under
//! an arbitrary Markov selection rule.

mod baseline;
mod config;
mod run;
mod schedule;
mod trace;

pub use baseline::{make_baseline, BaselineKind};
pub use config::{ChainEntry, RunConfigFile, Source};
pub use run::{missa_step, run, ChainSpec, ChainWorker, Execution, RunConfig, PARALLEL_MIN_CHAINS};
pub use schedule::StepsizeSchedule;
pub use trace::{read_records, write_records, Trace, TraceRecord, CROSSING_THRESHOLDS, TRACE_HEADER};
