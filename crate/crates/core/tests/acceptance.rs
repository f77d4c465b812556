//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use missa::experiment::{
    build_experiment, build_experiment_with, data, decay_diagnostic, nine_state_matrix, reseed, run_suite, study_box,
    study_initials, study_matrix, study_offsets, study_weights, ExperimentSpec, Method, Regime,
};
use missa::markov::{cesaro_limit_oracle, decompose, TransitionMatrix};
use missa::optimizer::{make_baseline, missa_step, run, BaselineKind, ChainSpec, ChainWorker, Execution, RunConfig, StepsizeSchedule};
use missa::problem::{Component, ConvexSumProblem, L1Component, NoiseModel};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn one_based(v: &[Vec<usize>]) -> Vec<Vec<usize>> {
    v.iter().map(|c| c.iter().map(|s| s + 1).collect()).collect()
}

fn nine_state_decomposition() -> Outcome {
    let p = nine_state_matrix();
    let d = decompose(&p).unwrap();
    let mut times: Vec<Duration> = (0..101)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(decompose(std::hint::black_box(&p)).unwrap());
            t.elapsed()
        })
        .collect();
    times.sort();
    let median = times[50];
    let structure = one_based(&d.classes) == vec![vec![1, 2, 3, 4], vec![5, 6, 7]]
        && d.class_periods == vec![2, 3]
        && d.transient == vec![7, 8]
        && d.global_period == 6;
    outcome(
        structure && median < Duration::from_millis(1),
        format!(
            "classes {:?} periods {:?} transient {:?} delta {}; median time {:.3} ms",
            one_based(&d.classes),
            d.class_periods,
            d.transient.iter().map(|s| s + 1).collect::<Vec<_>>(),
            d.global_period,
            median.as_secs_f64() * 1e3
        ),
    )
}

fn study_decomposition() -> Outcome {
    let d = decompose(&study_matrix()).unwrap();
    let pass = one_based(&d.classes) == vec![vec![1, 2, 3, 4], vec![5, 6, 7]]
        && d.class_periods == vec![2, 1]
        && d.transient.is_empty()
        && d.global_period == 2;
    outcome(
        pass,
        format!("classes {:?} periods {:?} delta {}", one_based(&d.classes), d.class_periods, d.global_period),
    )
}

fn study_weights_listing() -> Outcome {
    let listed = [0.121, 0.129, 0.043, 0.206, 0.213, 0.203, 0.083];
    let w = study_weights().unwrap();
    let dev: Vec<f64> = w.iter().zip(listed).map(|(a, b)| (a - b).abs()).collect();
    let worst = dev.iter().copied().fold(0.0, f64::max);
    let off: Vec<usize> = dev.iter().enumerate().filter(|(_, d)| **d > 5e-4).map(|(i, _)| i + 1).collect();
    outcome(
        worst <= 5e-4,
        format!(
            "computed {:?}; max deviation {worst:.2e}; entries beyond 5e-4: {off:?}",
            w.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>()
        ),
    )
}

fn oracle_agreement() -> Outcome {
    let check = |seed: u64| {
        let p = common::random_stochastic(seed, 8);
        let d = decompose(&p).unwrap();
        let oracle = cesaro_limit_oracle(&p, 100_000 * d.global_period);
        let agree = common::max_abs_diff(&d.cesaro, &oracle);
        let invariant = common::max_abs_diff(&(&d.cesaro * p.matrix()), &d.cesaro);
        (agree, invariant, d.global_period > 1, !d.transient.is_empty())
    };
    #[cfg(feature = "parallel")]
    let results: Vec<(f64, f64, bool, bool)> = {
        use rayon::prelude::*;
        (0..50u64).into_par_iter().map(check).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(f64, f64, bool, bool)> = (0..50u64).map(check).collect();
    let agree = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let invariant = results.iter().map(|r| r.1).fold(0.0, f64::max);
    outcome(
        agree <= 1e-3 && invariant <= 1e-10,
        format!(
            "50 matrices ({} periodic, {} with transient states): max oracle gap {agree:.2e}, max |P_d P - P_d| {invariant:.2e}",
            results.iter().filter(|r| r.2).count(),
            results.iter().filter(|r| r.3).count()
        ),
    )
}

fn cyclic_reduction() -> Outcome {
    let rows = data::dense_rows();
    let b = study_offsets();
    let bx = study_box();
    let m = rows.len();
    let (p, init) = make_baseline(&BaselineKind::Cyclic, m).unwrap();
    let schedule = StepsizeSchedule::diminishing(2.5, 0.667, m).unwrap();
    let problem = ConvexSumProblem::l1(rows.clone(), &b, bx.clone(), study_weights().unwrap()).unwrap();
    let config = RunConfig::new(problem, p, vec![ChainSpec { initial: init, seed: 0 }], schedule, NoiseModel::Zero, 10_000).unwrap();

    let mut workers = vec![ChainWorker::new(0, &config.chains[0], bx.dim()).unwrap()];
    let mut x = config.x0.clone();
    // projected cyclic incremental subgradient steps, component (k+1) mod m at step k
    let mut y: Vec<f64> = bx.lower().iter().zip(bx.upper()).map(|(l, u)| 0.0f64.max(*l).min(*u)).collect();
    let mut first_mismatch = (x != y).then_some(0);
    for k in 0..10_000 {
        x = missa_step(&x, &mut workers, &config, k, schedule.stepsize(k));
        let i = (k + 1) % m;
        let mut r = 0.0;
        for (a, v) in rows[i].iter().zip(&y) {
            if *a != 0.0 {
                r += a * v;
            }
        }
        r -= b[i];
        let lambda = schedule.stepsize(k);
        for j in 0..y.len() {
            let g = if r > 0.0 && rows[i][j] != 0.0 {
                rows[i][j]
            } else if r < 0.0 && rows[i][j] != 0.0 {
                -rows[i][j]
            } else {
                0.0
            };
            y[j] = (y[j] - lambda * g).clamp(bx.lower()[j], bx.upper()[j]);
        }
        if first_mismatch.is_none() && x != y {
            first_mismatch = Some(k + 1);
        }
    }
    match first_mismatch {
        None => outcome(true, "10000 iterates bitwise identical"),
        Some(k) => outcome(false, format!("iterates differ from k = {k}")),
    }
}

fn study_convergence() -> Outcome {
    let spec = ExperimentSpec::new(Method::M1, 1, (0..11).collect());
    let summary = run_suite(&spec).unwrap();
    let c = summary.crossing(1e-3).unwrap();
    let slowest = summary.seeds.iter().map(|s| s.ns_per_iteration * spec.budget as f64 * 1e-9).fold(0.0, f64::max);
    let median = c.median.unwrap_or(f64::INFINITY);
    outcome(
        median <= 1e4 && slowest <= 10.0,
        format!(
            "median first k with f < 1e-3: {median} (IQR {}); {} of 11 crossed; slowest seed {slowest:.2} s",
            c.iqr.map_or("unbounded".to_string(), |v| v.to_string()),
            c.crossed
        ),
    )
}

fn noise_floor() -> Outcome {
    let plateau = |lambda: f64, factor: f64| {
        let mut spec = ExperimentSpec::new(Method::M1, 5, (0..5).collect());
        spec.regime = Regime::Constant;
        spec.schedule = Some(StepsizeSchedule::constant(lambda).unwrap());
        spec.noise_factor = factor;
        spec.budget = 1_000_000;
        spec.stride = 100_000;
        run_suite(&spec).unwrap()
    };
    let base = plateau(5e-4, 1.0);
    let reduced = plateau(5e-5, 0.1);
    let above_zero = base.seeds.iter().all(|s| s.tail_min_f > 0.0 && s.best_f > 0.0);
    let lower = reduced.median_tail_min_f < base.median_tail_min_f;
    outcome(
        above_zero && lower,
        format!(
            "median plateau (min f over last 10%): lambda 5e-4 -> {:.3e}, lambda 5e-5 with noise /10 -> {:.3e}",
            base.median_tail_min_f, reduced.median_tail_min_f
        ),
    )
}

fn decay_fits() -> Outcome {
    let study = decay_diagnostic(&study_matrix(), 50).unwrap();
    let nine = decay_diagnostic(&nine_state_matrix(), 50).unwrap();
    let transient = nine.transient.as_ref();
    let pass = study.matrix.beta_hat > 0.0
        && study.matrix.rmse < 0.5
        && nine.matrix.beta_hat > 0.0
        && nine.matrix.rmse < 0.5
        && transient.is_some_and(|t| t.beta_hat > 0.0);
    outcome(
        pass,
        format!(
            "7-state beta {:.3} rmse {:.1e}; 9-state beta {:.3} rmse {:.1e}; transient mass beta {}",
            study.matrix.beta_hat,
            study.matrix.rmse,
            nine.matrix.beta_hat,
            nine.matrix.rmse,
            transient.map_or("none".to_string(), |t| format!("{:.3}", t.beta_hat))
        ),
    )
}

fn weighted_target() -> Outcome {
    let p = TransitionMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.5, 0.5, 0.0]]).unwrap();
    let d = decompose(&p).unwrap();
    let start = vec![0.0, 0.0, 1.0];
    let w = missa::problem::weights_from_chains(std::slice::from_ref(&start), &d).unwrap();
    let components: Vec<Arc<dyn Component>> = vec![
        Arc::new(L1Component::new(vec![1.0, 0.0], 0.3)),
        Arc::new(L1Component::new(vec![0.0, 1.0], 0.6)),
        Arc::new(L1Component::new(vec![2.0, 2.0], 3.0)),
    ];
    let bx = missa::problem::FeasibleBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let problem = ConvexSumProblem::new(components, bx, w.clone()).unwrap();
    let config = RunConfig::new(
        problem.clone(),
        p,
        vec![ChainSpec { initial: start, seed: 9 }],
        StepsizeSchedule::diminishing(1.0, 0.75, d.global_period).unwrap(),
        NoiseModel::Zero,
        100_000,
    )
    .unwrap();
    let trace = run(&config).unwrap();
    let mut grid_min = f64::INFINITY;
    for i in 0..=1000 {
        for j in 0..=1000 {
            grid_min = grid_min.min(problem.objective(&[i as f64 * 1e-3, j as f64 * 1e-3]));
        }
    }
    outcome(
        w == vec![0.5, 0.5, 0.0] && trace.best_f <= grid_min + 1e-3,
        format!(
            "weights {w:?}; best weighted f {:.3e} at {:?}; grid minimum {grid_min:.3e}",
            trace.best_f, trace.best_x
        ),
    )
}

fn determinism() -> Outcome {
    let mut config = build_experiment_with(Method::M1, 5, Regime::Diminishing).unwrap();
    let inits = study_initials();
    config.chains = (0..16).map(|i| ChainSpec { initial: inits[i % 2].clone(), seed: 2024 }).collect();
    config.budget = 20_000;
    let mut csvs = Vec::new();
    let mut plain = build_experiment(Method::M1, 5).unwrap();
    plain.budget = 20_000;
    reseed(&mut plain, 2024);
    let twice = run(&plain).unwrap().to_csv_string() == run(&plain).unwrap().to_csv_string();

    config.execution = Execution::Sequential;
    csvs.push(run(&config).unwrap().to_csv_string());
    config.execution = Execution::Parallel;
    #[cfg(feature = "parallel")]
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        csvs.push(pool.install(|| run(&config).unwrap().to_csv_string()));
    }
    #[cfg(not(feature = "parallel"))]
    csvs.push(run(&config).unwrap().to_csv_string());
    let across = csvs.windows(2).all(|w| w[0] == w[1]);
    outcome(
        twice && across,
        format!("repeat run identical: {twice}; sequential / 1-thread / 4-thread identical: {across}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("nine-state decomposition", nine_state_decomposition),
        ("seven-state decomposition", study_decomposition),
        ("weights match the listed vector within 5e-4", study_weights_listing),
        ("Cesaro limit agrees with power averaging", oracle_agreement),
        ("single cyclic chain equals cyclic incremental method", cyclic_reduction),
        ("two-chain convergence at desk scale", study_convergence),
        ("constant-stepsize noise floor shrinks with lambda and noise", noise_floor),
        ("geometric decay of powers and transient mass", decay_fits),
        ("chain weights select the minimized objective", weighted_target),
        ("bitwise determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let o = check();
        println!(
            "[{}] criterion {:>2}: {name}: {} ({:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            started.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of {} criteria fail: {failed:?}", failed.len(), criteria.len());
        ExitCode::FAILURE
    }
}
