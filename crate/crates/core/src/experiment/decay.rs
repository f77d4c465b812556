use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::markov::{decompose, TransitionMatrix};
use crate::{Error, Result};

/// Values at or below this are treated as converged and left out of fits.
pub const DECAY_FLOOR: f64 = 1e-14;

/// Least-squares fit of `log y_k ≈ log α̂ - β̂ k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// RMSE of the fit in log space.
    pub rmse: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayDiagnostic {
    pub period: usize,
    /// `‖P^{δk} - Δ‖_∞` for `k = 1..=k_max`.
    pub norms: Vec<f64>,
    pub matrix: DecayFit,
    /// Worst-case probability of sitting in a transient state after `δk`
    /// steps, over all start states. Empty when there are no transient states.
    pub transient_mass: Vec<f64>,
    pub transient: Option<DecayFit>,
}

/// Fits `(k, y_k)` pairs with `y_k > DECAY_FLOOR`.
pub fn fit_log_linear(series: &[(usize, f64)]) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(_, y)| *y > DECAY_FLOOR)
        .map(|&(k, y)| (k as f64, y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "{} of {} values above {DECAY_FLOOR:e}",
            pts.len(),
            series.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_k = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_k).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_k) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_k;
    let rmse = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    let kept: Vec<usize> = series.iter().filter(|(_, y)| *y > DECAY_FLOOR).map(|(k, _)| *k).collect();
    Ok(DecayFit {
        alpha_hat: intercept.exp(),
        beta_hat: -slope,
        rmse,
        k_min: kept[0],
        k_max: *kept.last().expect("at least two points"),
        points: kept.len(),
    })
}

fn inf_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Measures how fast `P^{δk}` approaches `Δ` and how fast mass leaves the
/// transient states, for `k = 1..=k_max`, and fits both on a log scale.
pub fn decay_diagnostic(p: &TransitionMatrix, k_max: usize) -> Result<DecayDiagnostic> {
    if k_max < 5 {
        return Err(Error::InvalidParameters(format!("k_max = {k_max}, need at least 5")));
    }
    let d = decompose(p)?;
    let step = crate::markov::matrix_power(p.matrix(), d.global_period);
    let mut power = step.clone();
    let mut norms = Vec::with_capacity(k_max);
    let mut transient_mass = Vec::new();
    for k in 1..=k_max {
        if k > 1 {
            power = &power * &step;
        }
        norms.push(inf_norm(&(&power - &d.power_limit)));
        if !d.transient.is_empty() {
            let worst = power
                .row_iter()
                .map(|r| d.transient.iter().map(|&j| r[j]).sum::<f64>())
                .fold(0.0, f64::max);
            transient_mass.push(worst);
        }
    }
    let indexed = |v: &[f64]| v.iter().enumerate().map(|(i, y)| (i + 1, *y)).collect::<Vec<_>>();
    let matrix = fit_log_linear(&indexed(&norms))?;
    let transient = if transient_mass.is_empty() {
        None
    } else {
        fit_log_linear(&indexed(&transient_mass)).ok()
    };
    Ok(DecayDiagnostic { period: d.global_period, norms, matrix, transient_mass, transient })
}
