use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{build_experiment_with, reseed, study_problem_file, Method, Regime};
use crate::optimizer::{run, RunConfig, RunConfigFile, StepsizeSchedule, Trace, CROSSING_THRESHOLDS};
use crate::{Error, Result};

pub const DEFAULT_BUDGET: usize = 100_000;

/// A seeded batch of runs of one method under one noise test.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub method: Method,
    pub test: u32,
    pub regime: Regime,
    /// Overrides the method's default schedule for `regime`.
    pub schedule: Option<StepsizeSchedule>,
    /// Multiplies the noise scale (scaled uniform and normal noise only).
    pub noise_factor: f64,
    pub seeds: Vec<u64>,
    pub budget: usize,
    pub stride: usize,
    /// Directory for per-seed trace CSVs and `summary.json`.
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(method: Method, test: u32, seeds: Vec<u64>) -> Self {
        Self {
            method,
            test,
            regime: Regime::Diminishing,
            schedule: None,
            noise_factor: 1.0,
            seeds,
            budget: DEFAULT_BUDGET,
            stride: 100,
            out: None,
        }
    }

    /// Run config for one seed.
    pub fn config(&self, seed: u64) -> Result<RunConfig> {
        let mut config = build_experiment_with(self.method, self.test, self.regime)?;
        if let Some(s) = self.schedule {
            s.validate()?;
            config.schedule = s;
        }
        config.noise = config.noise.scaled(self.noise_factor);
        config.budget = self.budget;
        config.stride = self.stride;
        reseed(&mut config, seed);
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    /// Threshold (formatted like `1e-3`) to first iteration below it.
    pub first_crossings: BTreeMap<String, Option<usize>>,
    pub best_f: f64,
    pub tail_min_f: f64,
    pub final_f: f64,
    pub subgradient_bound: f64,
    pub ns_per_iteration: f64,
    pub warnings: Vec<String>,
}

/// Median and quartiles of first-crossing iterations; runs that never cross
/// count as infinite, so a statistic is `None` when it falls on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingStats {
    pub threshold: f64,
    pub crossed: usize,
    pub median: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
    pub iqr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub method: Method,
    pub test: u32,
    pub schedule: StepsizeSchedule,
    pub budget: usize,
    pub chains: usize,
    pub seeds: Vec<SeedSummary>,
    pub crossings: Vec<CrossingStats>,
    pub median_best_f: f64,
    pub median_tail_min_f: f64,
    pub mean_ns_per_iteration: f64,
}

impl SuiteSummary {
    pub fn crossing(&self, threshold: f64) -> Option<&CrossingStats> {
        self.crossings.iter().find(|c| c.threshold == threshold)
    }
}

/// Sample quantile with linear interpolation between order statistics.
/// Returns `None` for empty input or when the result is not finite.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let value = if lo == hi { v[lo] } else { v[lo] + (pos - lo as f64) * (v[hi] - v[lo]) };
    value.is_finite().then_some(value)
}

fn threshold_key(t: f64) -> String {
    format!("{t:e}")
}

fn summarize_seed(seed: u64, trace: &Trace) -> SeedSummary {
    SeedSummary {
        seed,
        first_crossings: trace.first_crossings.iter().map(|(t, k)| (threshold_key(*t), *k)).collect(),
        best_f: trace.best_f,
        tail_min_f: trace.tail_min_f,
        final_f: trace.records.last().map_or(f64::NAN, |r| r.f),
        subgradient_bound: trace.subgradient_bound,
        ns_per_iteration: trace.nanos_per_iteration(),
        warnings: trace.warnings.clone(),
    }
}

#[cfg(feature = "parallel")]
fn run_seeds(spec: &ExperimentSpec) -> Result<Vec<(u64, RunConfig, Trace)>> {
    use rayon::prelude::*;
    spec.seeds
        .par_iter()
        .map(|&seed| {
            let config = spec.config(seed)?;
            let trace = run(&config)?;
            Ok((seed, config, trace))
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_seeds(spec: &ExperimentSpec) -> Result<Vec<(u64, RunConfig, Trace)>> {
    spec.seeds
        .iter()
        .map(|&seed| {
            let config = spec.config(seed)?;
            let trace = run(&config)?;
            Ok((seed, config, trace))
        })
        .collect()
}

/// Runs every seed (concurrently with the `parallel` feature), writes
/// `trace_seed<seed>.csv`, `config_seed<seed>.json` and `summary.json` into
/// `spec.out` when set, and returns the summary.
pub fn run_suite(spec: &ExperimentSpec) -> Result<SuiteSummary> {
    if spec.seeds.is_empty() {
        return Err(Error::InvalidSpec("seed list is empty".into()));
    }
    if spec.budget == 0 {
        return Err(Error::InvalidSpec("budget must be positive".into()));
    }
    // surface config errors before spending time on runs
    let first = spec.config(spec.seeds[0])?;
    let results = run_seeds(spec)?;

    let seeds: Vec<SeedSummary> = results.iter().map(|(s, _, t)| summarize_seed(*s, t)).collect();
    let crossings = CROSSING_THRESHOLDS
        .iter()
        .map(|&t| {
            let ks: Vec<f64> = results
                .iter()
                .map(|(_, _, tr)| tr.first_crossing(t).map_or(f64::INFINITY, |k| k as f64))
                .collect();
            let q1 = quantile(&ks, 0.25);
            let q3 = quantile(&ks, 0.75);
            CrossingStats {
                threshold: t,
                crossed: ks.iter().filter(|k| k.is_finite()).count(),
                median: quantile(&ks, 0.5),
                q1,
                q3,
                iqr: q1.zip(q3).map(|(a, b)| b - a),
            }
        })
        .collect();
    let bests: Vec<f64> = seeds.iter().map(|s| s.best_f).collect();
    let tails: Vec<f64> = seeds.iter().map(|s| s.tail_min_f).collect();
    let summary = SuiteSummary {
        method: spec.method,
        test: spec.test,
        schedule: first.schedule,
        budget: spec.budget,
        chains: first.chains.len(),
        median_best_f: quantile(&bests, 0.5).unwrap_or(f64::NAN),
        median_tail_min_f: quantile(&tails, 0.5).unwrap_or(f64::NAN),
        mean_ns_per_iteration: seeds.iter().map(|s| s.ns_per_iteration).sum::<f64>() / seeds.len() as f64,
        seeds,
        crossings,
    };

    if let Some(dir) = &spec.out {
        std::fs::create_dir_all(dir)?;
        for (seed, config, trace) in &results {
            trace.write_csv(BufWriter::new(File::create(dir.join(format!("trace_seed{seed}.csv")))?))?;
            let file = RunConfigFile::from_config(config, study_problem_file());
            std::fs::write(dir.join(format!("config_seed{seed}.json")), serde_json::to_string_pretty(&file)?)?;
        }
        std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(summary)
}
