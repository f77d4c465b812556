use std::io::{BufRead, Write};
use std::time::Duration;

use crate::{Error, Result};

pub const TRACE_HEADER: &str = "k,f,best_f,lambda,states";

/// Objective levels whose first crossing is tracked during a run.
pub const CROSSING_THRESHOLDS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-6];

/// One recorded iteration. `lambda` is the stepsize applied at iteration `k`
/// and `states` holds `s_ℓ(k)` for every chain, 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub f: f64,
    pub best_f: f64,
    pub lambda: f64,
    pub states: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub final_x: Vec<f64>,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    /// First `k` with `f(x^k) < threshold`, per [`CROSSING_THRESHOLDS`].
    pub first_crossings: Vec<(f64, Option<usize>)>,
    /// Minimum of `f(x^k)` over the last tenth of the run.
    pub tail_min_f: f64,
    /// Largest `‖g‖` actually used in a step (the realized bound `C`).
    pub subgradient_bound: f64,
    pub wall_time: Duration,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl Trace {
    pub fn first_crossing(&self, threshold: f64) -> Option<usize> {
        self.first_crossings.iter().find(|(t, _)| *t == threshold).and_then(|(_, k)| *k)
    }

    pub fn nanos_per_iteration(&self) -> f64 {
        if self.iterations == 0 {
            0.0
        } else {
            self.wall_time.as_nanos() as f64 / self.iterations as f64
        }
    }

    /// Writes the records as CSV with 1-based states.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_records(&self.records, out)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

pub fn write_records<W: Write>(records: &[TraceRecord], mut out: W) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in records {
        let states: Vec<String> = r.states.iter().map(|s| (s + 1).to_string()).collect();
        writeln!(out, "{},{},{},{},{}", r.k, r.f, r.best_f, r.lambda, states.join("|"))?;
    }
    Ok(())
}

/// Parses a trace CSV written by [`write_records`].
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<TraceRecord>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?;
    if header.as_deref().map(str::trim) != Some(TRACE_HEADER) {
        return Err(Error::Parse(format!("trace must start with `{TRACE_HEADER}`")));
    }
    let mut records = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("trace line {}: {what}", n + 2));
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(bad("expected 5 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        let states = fields[4]
            .split('|')
            .map(|s| match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(bad("bad state")),
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(TraceRecord {
            k: fields[0].parse().map_err(|_| bad("bad iteration"))?,
            f: num(fields[1])?,
            best_f: num(fields[2])?,
            lambda: num(fields[3])?,
            states,
        });
    }
    Ok(records)
}
