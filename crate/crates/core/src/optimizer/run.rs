use std::time::Instant;

use rand_chacha::ChaCha8Rng;

use super::trace::{Trace, TraceRecord, CROSSING_THRESHOLDS};
use super::StepsizeSchedule;
use crate::markov::{decompose, validate_distribution, ChainDecomposition, ChainState, TransitionMatrix};
use crate::problem::{ConvexSumProblem, NoiseModel};
use crate::{Error, Result};

/// Chain count from which [`Execution::Auto`] runs subiterations on the
/// thread pool.
pub const PARALLEL_MIN_CHAINS: usize = 8;

/// How the per-chain subiterations of one iteration are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// On the rayon pool when the `parallel` feature is enabled, sequential
    /// otherwise.
    Parallel,
    /// Parallel from [`PARALLEL_MIN_CHAINS`] chains on.
    #[default]
    Auto,
}

/// Initial distribution and seed of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub initial: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ConvexSumProblem,
    pub transition: TransitionMatrix,
    pub decomposition: ChainDecomposition,
    pub chains: Vec<ChainSpec>,
    pub schedule: StepsizeSchedule,
    pub noise: NoiseModel,
    pub x0: Vec<f64>,
    /// Number of iterations `K`; the run produces `x^1 .. x^K`.
    pub budget: usize,
    /// Record every `stride`-th iterate (plus the first and last).
    pub stride: usize,
    /// Per-component factors applied to subgradients, so a step uses
    /// `ω_i g_i`. `None` steps on the unweighted components.
    pub step_weights: Option<Vec<f64>>,
    pub execution: Execution,
}

impl RunConfig {
    /// Config with `x0 = P_X(0)`, stride 1, unweighted steps.
    pub fn new(
        problem: ConvexSumProblem,
        transition: TransitionMatrix,
        chains: Vec<ChainSpec>,
        schedule: StepsizeSchedule,
        noise: NoiseModel,
        budget: usize,
    ) -> Result<Self> {
        let decomposition = decompose(&transition)?;
        let x0 = problem.project(&vec![0.0; problem.dim()]);
        let config = Self {
            problem,
            transition,
            decomposition,
            chains,
            schedule,
            noise,
            x0,
            budget,
            stride: 1,
            step_weights: None,
            execution: Execution::Auto,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.transition.m();
        if self.problem.len() != m {
            return Err(Error::InvalidConfig(format!(
                "{} components but {m} chain states",
                self.problem.len()
            )));
        }
        if self.chains.is_empty() {
            return Err(Error::InvalidConfig("at least one chain is required".into()));
        }
        for c in &self.chains {
            validate_distribution(&c.initial, m)?;
        }
        if !self.problem.feasible().contains(&self.x0) {
            return Err(Error::InvalidConfig("x0 is not in the feasible box".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be at least 1".into()));
        }
        if self.stride == 0 {
            return Err(Error::InvalidConfig("trace stride must be at least 1".into()));
        }
        if let Some(w) = &self.step_weights {
            if w.len() != m || w.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidConfig("step weights must be m nonnegative numbers".into()));
            }
        }
        self.noise.validate()
    }

    /// Recurrent classes that no chain can reach from its initial support.
    pub fn unreachable_classes(&self) -> Vec<usize> {
        let m = self.transition.m();
        let mut seen = vec![false; m];
        let mut stack: Vec<usize> = self
            .chains
            .iter()
            .flat_map(|c| c.initial.iter().enumerate().filter(|(_, p)| **p > 0.0).map(|(i, _)| i))
            .collect();
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            stack.extend(self.transition.successors(i).filter(|&j| !seen[j]));
        }
        (0..self.decomposition.classes.len())
            .filter(|&v| !self.decomposition.classes[v].iter().any(|&s| seen[s]))
            .collect()
    }

    fn parallel(&self) -> bool {
        match self.execution {
            Execution::Sequential => false,
            Execution::Parallel => true,
            Execution::Auto => self.chains.len() >= PARALLEL_MIN_CHAINS,
        }
    }
}

/// Per-chain state of a run: the trajectory, its noise stream and scratch
/// buffers for the subiteration.
#[derive(Debug, Clone)]
pub struct ChainWorker {
    chain: ChainState,
    noise_rng: ChaCha8Rng,
    sub: Vec<f64>,
    grad: Vec<f64>,
    eps: Vec<f64>,
    max_grad_norm: f64,
}

impl ChainWorker {
    pub fn new(chain_id: usize, spec: &ChainSpec, n: usize) -> Result<Self> {
        Ok(Self::from_state(
            ChainState::start(&spec.initial, chain_id as u64, spec.seed)?,
            chain_id,
            spec.seed,
            n,
        ))
    }

    pub fn from_state(chain: ChainState, chain_id: usize, seed: u64, n: usize) -> Self {
        Self {
            chain,
            noise_rng: crate::markov::chain_noise_stream(chain_id as u64, seed),
            sub: vec![0.0; n],
            grad: vec![0.0; n],
            eps: vec![0.0; n],
            max_grad_norm: 0.0,
        }
    }

    pub fn state(&self) -> usize {
        self.chain.current()
    }

    /// Steps the chain to `s(k+1)` and forms
    /// `x_ℓ = x - λ (g_{s(k+1)}(x) + ε^{k+1})`.
    fn advance(&mut self, x: &[f64], config: &RunConfig, k: usize, lambda: f64) {
        let s = self.chain.step(&config.transition);
        config.problem.component(s).subgradient_into(x, &mut self.grad);
        if let Some(w) = &config.step_weights {
            let ws = w[s];
            self.grad.iter_mut().for_each(|g| *g *= ws);
        }
        let norm = self.grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        self.max_grad_norm = self.max_grad_norm.max(norm);

        if config.noise.is_zero() {
            for ((out, xi), g) in self.sub.iter_mut().zip(x).zip(&self.grad) {
                *out = xi - lambda * g;
            }
        } else {
            config.noise.sample_into(k as u64 + 1, &mut self.noise_rng, &mut self.eps);
            for (((out, xi), g), e) in self.sub.iter_mut().zip(x).zip(&self.grad).zip(&self.eps) {
                *out = xi - lambda * (g + e);
            }
        }
    }
}

/// One iteration: advance every chain, average the subiterations in chain
/// order and project. Chains may run concurrently; the result does not depend
/// on scheduling.
pub fn missa_step(
    x: &[f64],
    workers: &mut [ChainWorker],
    config: &RunConfig,
    k: usize,
    lambda: f64,
) -> Vec<f64> {
    advance_all(x, workers, config, k, lambda);
    let mut next = workers[0].sub.clone();
    if workers.len() > 1 {
        for w in &workers[1..] {
            next.iter_mut().zip(&w.sub).for_each(|(a, b)| *a += b);
        }
        let count = workers.len() as f64;
        next.iter_mut().for_each(|a| *a /= count);
    }
    config.problem.feasible().project_in_place(&mut next);
    next
}

#[cfg(feature = "parallel")]
fn advance_all(x: &[f64], workers: &mut [ChainWorker], config: &RunConfig, k: usize, lambda: f64) {
    use rayon::prelude::*;
    if config.parallel() && workers.len() > 1 {
        workers.par_iter_mut().for_each(|w| w.advance(x, config, k, lambda));
    } else {
        workers.iter_mut().for_each(|w| w.advance(x, config, k, lambda));
    }
}

#[cfg(not(feature = "parallel"))]
fn advance_all(x: &[f64], workers: &mut [ChainWorker], config: &RunConfig, k: usize, lambda: f64) {
    let _ = config.parallel();
    workers.iter_mut().for_each(|w| w.advance(x, config, k, lambda));
}

/// Runs `config.budget` iterations from `x0`.
///
/// Best-so-far and threshold crossings are tracked on every iteration;
/// records are kept every `stride` iterations and always at `k = 0` and
/// `k = budget`.
pub fn run(config: &RunConfig) -> Result<Trace> {
    config.validate()?;
    let mut warnings = Vec::new();
    for v in config.unreachable_classes() {
        let states: Vec<usize> = config.decomposition.classes[v].iter().map(|s| s + 1).collect();
        let msg = format!("recurrent class {states:?} is unreachable from every initial distribution");
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let n = config.problem.dim();
    let mut workers = config
        .chains
        .iter()
        .enumerate()
        .map(|(id, spec)| ChainWorker::new(id, spec, n))
        .collect::<Result<Vec<_>>>()?;

    let started = Instant::now();
    let budget = config.budget;
    let tail_start = budget - budget / 10;
    let mut x = config.x0.clone();
    let mut f = config.problem.objective(&x);
    let mut best_f = f;
    let mut best_x = x.clone();
    let mut tail_min_f = if tail_start == 0 { f } else { f64::INFINITY };
    let mut crossings: Vec<(f64, Option<usize>)> =
        CROSSING_THRESHOLDS.iter().map(|&t| (t, (f < t).then_some(0))).collect();

    let states = |ws: &[ChainWorker]| ws.iter().map(ChainWorker::state).collect::<Vec<_>>();
    let mut records = vec![TraceRecord {
        k: 0,
        f,
        best_f,
        lambda: config.schedule.stepsize(0),
        states: states(&workers),
    }];

    for k in 0..budget {
        let lambda = config.schedule.stepsize(k);
        x = missa_step(&x, &mut workers, config, k, lambda);
        f = config.problem.objective(&x);
        let iter = k + 1;
        if f < best_f {
            best_f = f;
            best_x.copy_from_slice(&x);
        }
        if iter >= tail_start {
            tail_min_f = tail_min_f.min(f);
        }
        for (t, first) in crossings.iter_mut() {
            if first.is_none() && f < *t {
                *first = Some(iter);
            }
        }
        if iter % config.stride == 0 || iter == budget {
            records.push(TraceRecord {
                k: iter,
                f,
                best_f,
                lambda: config.schedule.stepsize(iter),
                states: states(&workers),
            });
        }
    }

    Ok(Trace {
        records,
        final_x: x,
        best_x,
        best_f,
        first_crossings: crossings,
        tail_min_f,
        subgradient_bound: workers.iter().fold(0.0, |acc, w| acc.max(w.max_grad_norm)),
        wall_time: started.elapsed(),
        iterations: budget,
        warnings,
    })
}
