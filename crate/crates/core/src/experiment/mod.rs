//! The sparse l1 residual study: the two-chain method (M1) against the
//! equal-probability Markov rule (M2), the cyclic rule (M3) and uniform
//! sampling (M4), under six noise models.

pub mod data;
mod decay;
mod suite;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use decay::{decay_diagnostic, fit_log_linear, DecayDiagnostic, DecayFit, DECAY_FLOOR};
pub use suite::{quantile, run_suite, CrossingStats, ExperimentSpec, SeedSummary, SuiteSummary, DEFAULT_BUDGET};

use crate::markov::{decompose, TransitionMatrix};
use crate::optimizer::{make_baseline, BaselineKind, ChainSpec, RunConfig, StepsizeSchedule};
use crate::problem::{weights_from_chains, ConvexSumProblem, FeasibleBox, NoiseModel, ProblemFile};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Two chains on the two-class periodic matrix.
    M1,
    /// Equal-probability neighbor rule, single chain.
    M2,
    /// Cyclic order, single chain.
    M3,
    /// Uniform sampling, single chain.
    M4,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::M1, Method::M2, Method::M3, Method::M4];

    /// Tuned `(a, ξ)` of the diminishing rule.
    pub fn diminishing_params(self) -> (f64, f64) {
        match self {
            Method::M1 | Method::M2 => (2.0, 0.7),
            Method::M3 | Method::M4 => (2.5, 0.667),
        }
    }

    /// Tuned constant stepsize.
    pub fn constant_lambda(self) -> f64 {
        match self {
            Method::M1 => 5e-4,
            _ => 1e-3,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::M1 => "m1",
            Method::M2 => "m2",
            Method::M3 => "m3",
            Method::M4 => "m4",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m1" => Ok(Method::M1),
            "m2" => Ok(Method::M2),
            "m3" => Ok(Method::M3),
            "m4" => Ok(Method::M4),
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Diminishing,
    Constant,
}

/// The study's transition matrix.
pub fn study_matrix() -> TransitionMatrix {
    TransitionMatrix::from_rows(&data::rows_of(&data::TRANSITION)).expect("study matrix is stochastic")
}

pub fn nine_state_matrix() -> TransitionMatrix {
    TransitionMatrix::from_rows(&data::rows_of(&data::NINE_STATE)).expect("example matrix is stochastic")
}

pub fn study_box() -> FeasibleBox {
    FeasibleBox::new(data::LOWER.to_vec(), data::UPPER.to_vec()).expect("study box is valid")
}

fn unit(m: usize, state: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[state - 1] = 1.0;
    v
}

/// Initial distributions of the two M1 chains.
pub fn study_initials() -> Vec<Vec<f64>> {
    data::CHAIN_STARTS.iter().map(|&s| unit(data::M, s)).collect()
}

/// Objective weights induced by the two M1 chains.
pub fn study_weights() -> Result<Vec<f64>> {
    weights_from_chains(&study_initials(), &decompose(&study_matrix())?)
}

/// `b = A y` with `y` the box midpoint, so `f* = 0`.
pub fn study_offsets() -> Vec<f64> {
    let y = study_box().midpoint();
    data::dense_rows().iter().map(|r| r.iter().zip(&y).map(|(a, v)| a * v).sum()).collect()
}

/// The study problem in its on-disk form.
pub fn study_problem_file() -> ProblemFile {
    ProblemFile::from_dense(&data::dense_rows(), study_offsets(), &study_box())
}

pub fn study_problem() -> Result<ConvexSumProblem> {
    ConvexSumProblem::l1(data::dense_rows(), &study_offsets(), study_box(), study_weights()?)
}

/// Transition matrix and chain start distributions of a method.
pub fn method_chains(method: Method) -> Result<(TransitionMatrix, Vec<Vec<f64>>)> {
    let m = data::M;
    Ok(match method {
        Method::M1 => (study_matrix(), study_initials()),
        Method::M2 => {
            let kind = BaselineKind::EqualProbability {
                neighbors: data::NEIGHBORS.iter().map(|set| set.iter().map(|j| j - 1).collect()).collect(),
                start: data::EQUAL_PROBABILITY_START - 1,
            };
            let (p, init) = make_baseline(&kind, m)?;
            (p, vec![init])
        }
        Method::M3 => {
            let (p, init) = make_baseline(&BaselineKind::Cyclic, m)?;
            (p, vec![init])
        }
        Method::M4 => {
            let (p, init) = make_baseline(&BaselineKind::UniformRandom, m)?;
            (p, vec![init])
        }
    })
}

/// Default stepsize schedule of a method under a regime.
///
/// M1's blocks follow the global period of its chain; the single-chain
/// baselines use unit blocks.
pub fn default_schedule(method: Method, regime: Regime) -> Result<StepsizeSchedule> {
    match regime {
        Regime::Constant => StepsizeSchedule::constant(method.constant_lambda()),
        Regime::Diminishing => {
            let (a, xi) = method.diminishing_params();
            let period = match method {
                Method::M1 => decompose(&study_matrix())?.global_period,
                _ => 1,
            };
            StepsizeSchedule::diminishing(a, xi, period)
        }
    }
}

/// Fully populated run of `method` under noise test `test` (1..=6) with the
/// diminishing rule and seed 0.
///
/// Every method is scored on the same objective, weighted by M1's Cesàro
/// weights. The single-chain baselines step on `ω_i f_i`; M1 steps on the
/// unweighted components.
pub fn build_experiment(method: Method, test: u32) -> Result<RunConfig> {
    build_experiment_with(method, test, Regime::Diminishing)
}

pub fn build_experiment_with(method: Method, test: u32, regime: Regime) -> Result<RunConfig> {
    let noise = NoiseModel::for_test(test)?;
    let problem = study_problem()?;
    let weights = problem.weights().to_vec();
    let (transition, initials) = method_chains(method)?;
    let chains = initials.into_iter().map(|initial| ChainSpec { initial, seed: 0 }).collect();
    let mut config = RunConfig::new(
        problem,
        transition,
        chains,
        default_schedule(method, regime)?,
        noise,
        DEFAULT_BUDGET,
    )?;
    if method != Method::M1 {
        config.step_weights = Some(weights);
    }
    Ok(config)
}

/// Sets every chain's seed.
pub fn reseed(config: &mut RunConfig, seed: u64) {
    config.chains.iter_mut().for_each(|c| c.seed = seed);
}
