use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use missa::experiment::{decay_diagnostic, default_schedule, run_suite, ExperimentSpec, Method, Regime};
use missa::markov::{decompose, read_distribution, read_matrix, DecompositionReport};
use missa::optimizer::{run, RunConfigFile, StepsizeSchedule};
use missa::problem::weights_from_chains;
use missa::{Error, Result};

#[derive(Parser)]
#[command(name = "missa", version, about = "Markovian incremental stochastic subgradient runs and chain diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Diminishing,
    Constant,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded suite of the l1 study, or a single run from a JSON config.
    Run {
        #[arg(long, default_value = "m1")]
        method: String,
        #[arg(long, default_value_t = 1)]
        test: u32,
        #[arg(long, value_enum, default_value = "diminishing")]
        schedule: ScheduleArg,
        /// Constant stepsize (defaults to the method's tuned value).
        #[arg(long)]
        lambda: Option<f64>,
        /// Diminishing-rule scale.
        #[arg(long)]
        a: Option<f64>,
        /// Diminishing-rule exponent.
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long, default_value_t = missa::experiment::DEFAULT_BUDGET)]
        budget: usize,
        /// Comma-separated seeds or a range such as `0..11`.
        #[arg(long, default_value = "0..11")]
        seeds: String,
        #[arg(long, default_value_t = 100)]
        stride: usize,
        /// Multiplies the noise scale.
        #[arg(long, default_value_t = 1.0)]
        noise_factor: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the JSON config instead of the study; other options except `--out` are ignored.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the recurrent classes, periods and transient states of a matrix.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Fit the geometric decay of `‖P^{δk} - Δ‖∞`.
    Decay {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 50)]
        kmax: usize,
    },
    /// Component weights induced by chains started from the given distributions.
    Weights {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        init: Vec<PathBuf>,
    },
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidSpec(format!("cannot parse seed list `{text}`"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..hi).collect());
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { method, test, schedule, lambda, a, xi, budget, seeds, stride, noise_factor, out, config } => {
            if let Some(path) = config {
                let config = RunConfigFile::load(&path)?;
                let trace = run(&config)?;
                if let Some(dir) = &out {
                    std::fs::create_dir_all(dir)?;
                    trace.write_csv(std::io::BufWriter::new(std::fs::File::create(dir.join("trace.csv"))?))?;
                }
                let crossings: Vec<_> =
                    trace.first_crossings.iter().map(|(t, k)| json!({ "threshold": t, "k": k })).collect();
                return print_json(&json!({
                    "iterations": trace.iterations,
                    "best_f": trace.best_f,
                    "final_f": trace.records.last().map(|r| r.f),
                    "best_x": trace.best_x,
                    "final_x": trace.final_x,
                    "first_crossings": crossings,
                    "ns_per_iteration": trace.nanos_per_iteration(),
                    "warnings": trace.warnings,
                }));
            }
            let method: Method = method.parse()?;
            let regime = match schedule {
                ScheduleArg::Diminishing => Regime::Diminishing,
                ScheduleArg::Constant => Regime::Constant,
            };
            let chosen = match default_schedule(method, regime)? {
                StepsizeSchedule::DiminishingBlock { a: a0, xi: xi0, period } => {
                    StepsizeSchedule::diminishing(a.unwrap_or(a0), xi.unwrap_or(xi0), period)?
                }
                StepsizeSchedule::Constant { lambda: l0 } => StepsizeSchedule::constant(lambda.unwrap_or(l0))?,
            };
            let mut spec = ExperimentSpec::new(method, test, parse_seeds(&seeds)?);
            spec.regime = regime;
            spec.schedule = Some(chosen);
            spec.budget = budget;
            spec.stride = stride;
            spec.noise_factor = noise_factor;
            spec.out = out;
            print_json(&run_suite(&spec)?)
        }
        Command::Decompose { matrix } => {
            let p = read_matrix(matrix)?;
            print_json(&DecompositionReport::from(&decompose(&p)?))
        }
        Command::Decay { matrix, kmax } => print_json(&decay_diagnostic(&read_matrix(matrix)?, kmax)?),
        Command::Weights { matrix, init } => {
            let p = read_matrix(matrix)?;
            let inits = init.iter().map(read_distribution).collect::<Result<Vec<_>>>()?;
            print_json(&json!({ "weights": weights_from_chains(&inits, &decompose(&p)?)? }))
        }
    }
}

fn error_line(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_line("usage", e.to_string().lines().next().unwrap_or("invalid arguments")));
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}
