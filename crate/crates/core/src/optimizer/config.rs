use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ChainSpec, Execution, RunConfig, StepsizeSchedule};
use crate::markov::{decompose, read_matrix, TransitionMatrix};
use crate::problem::{weights_from_chains, NoiseModel, ProblemFile};
use crate::Result;

/// A value given inline or by a path relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Path { path: PathBuf },
    Inline(T),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub initial: Vec<f64>,
    pub seed: u64,
}

/// JSON form of a [`RunConfig`].
///
/// `matrix` is either inline rows or a path to the plain-text matrix format.
/// Without `weights` the objective uses the chains' Cesàro weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfigFile {
    pub problem: Source<ProblemFile>,
    pub matrix: Source<Vec<Vec<f64>>>,
    pub chains: Vec<ChainEntry>,
    pub schedule: StepsizeSchedule,
    pub noise: NoiseModel,
    pub budget: usize,
    #[serde(default = "one")]
    pub stride: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_weights: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

impl RunConfigFile {
    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let file: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        file.resolve(path.parent().unwrap_or(Path::new(".")))
    }

    pub fn resolve(&self, base: &Path) -> Result<RunConfig> {
        let problem_file = match &self.problem {
            Source::Inline(p) => p.clone(),
            Source::Path { path } => ProblemFile::load(base.join(path))?,
        };
        let transition = match &self.matrix {
            Source::Inline(rows) => TransitionMatrix::from_rows(rows)?,
            Source::Path { path } => read_matrix(base.join(path))?,
        };
        let chains: Vec<ChainSpec> = self
            .chains
            .iter()
            .map(|c| ChainSpec { initial: c.initial.clone(), seed: c.seed })
            .collect();
        let weights = match &self.weights {
            Some(w) => w.clone(),
            None => {
                let inits: Vec<Vec<f64>> = chains.iter().map(|c| c.initial.clone()).collect();
                weights_from_chains(&inits, &decompose(&transition)?)?
            }
        };
        let problem = problem_file.into_problem(weights)?;
        let mut config = RunConfig::new(problem, transition, chains, self.schedule, self.noise, self.budget)?;
        config.stride = self.stride;
        if let Some(x0) = &self.x0 {
            config.x0 = x0.clone();
        }
        config.step_weights = self.step_weights.clone();
        config.execution = Execution::Auto;
        config.validate()?;
        Ok(config)
    }

    /// Inline description of an l1 residual run.
    pub fn from_config(config: &RunConfig, problem: ProblemFile) -> Self {
        Self {
            problem: Source::Inline(problem),
            matrix: Source::Inline(config.transition.to_rows()),
            chains: config.chains.iter().map(|c| ChainEntry { initial: c.initial.clone(), seed: c.seed }).collect(),
            schedule: config.schedule,
            noise: config.noise,
            budget: config.budget,
            stride: config.stride,
            weights: Some(config.problem.weights().to_vec()),
            x0: Some(config.x0.clone()),
            step_weights: config.step_weights.clone(),
        }
    }
}
