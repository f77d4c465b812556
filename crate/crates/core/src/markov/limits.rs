use nalgebra::{DMatrix, DVector};

use super::{ChainDecomposition, TransitionMatrix, FIXED_POINT_TOL, STOCHASTIC_TOL};
use crate::{Error, Result};

/// Cap on repeated squarings in [`power_limit`]. `2^64` steps is far past any
/// mixing time representable in double precision.
pub const POWER_LIMIT_MAX_SQUARINGS: usize = 64;

// Smallest admissible |pivot| relative to the largest one.
const PIVOT_RTOL: f64 = 1e-13;

/// Exact Cesàro limit from the class structure.
///
/// Each recurrent row carries its class's stationary distribution; each
/// transient row mixes them with the absorption probabilities
/// `(I - T) a_v = Q_v 1`. Transient columns are zero.
pub fn cesaro_limit(
    p: &TransitionMatrix,
    classes: &[Vec<usize>],
    transient: &[usize],
) -> Result<DMatrix<f64>> {
    let m = p.m();
    let mut limit = DMatrix::zeros(m, m);

    let stationaries: Vec<Vec<f64>> = classes
        .iter()
        .map(|class| class_stationary(p, class))
        .collect::<Result<_>>()?;

    for (class, pi) in classes.iter().zip(&stationaries) {
        for &i in class {
            for (&j, &pj) in class.iter().zip(pi) {
                limit[(i, j)] = pj;
            }
        }
    }

    if transient.is_empty() {
        return Ok(limit);
    }

    let u = transient.len();
    let mut lhs = DMatrix::<f64>::identity(u, u);
    for (a, &i) in transient.iter().enumerate() {
        for (b, &j) in transient.iter().enumerate() {
            lhs[(a, b)] -= p.get(i, j);
        }
    }
    let mut rhs = DMatrix::<f64>::zeros(u, classes.len());
    for (a, &i) in transient.iter().enumerate() {
        for (v, class) in classes.iter().enumerate() {
            rhs[(a, v)] = class.iter().map(|&j| p.get(i, j)).sum();
        }
    }
    let absorption = solve(lhs, &rhs, "absorption probabilities")?;

    for (a, &i) in transient.iter().enumerate() {
        for (v, (class, pi)) in classes.iter().zip(&stationaries).enumerate() {
            let reach = absorption[(a, v)].clamp(0.0, 1.0);
            for (&j, &pj) in class.iter().zip(pi) {
                limit[(i, j)] = reach * pj;
            }
        }
    }
    Ok(limit)
}

/// Stationary distribution of the chain restricted to a closed class:
/// `(P_vᵀ - I) π = 0` with the last equation replaced by `Σ π = 1`.
fn class_stationary(p: &TransitionMatrix, class: &[usize]) -> Result<Vec<f64>> {
    let k = class.len();
    if k == 1 {
        return Ok(vec![1.0]);
    }
    let mut lhs = DMatrix::<f64>::zeros(k, k);
    for (a, &i) in class.iter().enumerate() {
        for (b, &j) in class.iter().enumerate() {
            // transpose: equation b collects inflow into state j
            lhs[(b, a)] = p.get(i, j);
        }
        lhs[(a, a)] -= 1.0;
    }
    for b in 0..k {
        lhs[(k - 1, b)] = 1.0;
    }
    let mut rhs = DMatrix::<f64>::zeros(k, 1);
    rhs[(k - 1, 0)] = 1.0;
    let sol = solve(lhs, &rhs, "stationary distribution")?;
    let mut pi: Vec<f64> = sol.column(0).iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);
    Ok(pi)
}

fn solve(lhs: DMatrix<f64>, rhs: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    let lu = lhs.lu();
    let u = lu.u();
    let diag = u.diagonal();
    let largest = diag.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let smallest = diag.iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs()));
    if largest.is_nan() || largest <= 0.0 || smallest < PIVOT_RTOL * largest {
        return Err(Error::SingularSolve(format!(
            "{what}: pivot ratio {:e}",
            smallest / largest
        )));
    }
    let sol = lu
        .solve(rhs)
        .ok_or_else(|| Error::SingularSolve(what.to_string()))?;
    if sol.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSolve(format!("{what}: non-finite solution")));
    }
    Ok(sol)
}

/// Finite-horizon average `(1/h) Σ_{j<h} P^j`.
///
/// Independent of the class structure; used to cross-check [`cesaro_limit`].
pub fn cesaro_limit_oracle(p: &TransitionMatrix, horizon: usize) -> DMatrix<f64> {
    let m = p.m();
    let horizon = horizon.max(1);
    let mut power = DMatrix::<f64>::identity(m, m);
    let mut next = DMatrix::<f64>::zeros(m, m);
    let mut acc = DMatrix::<f64>::zeros(m, m);
    for _ in 0..horizon {
        acc += &power;
        power.mul_to(p.matrix(), &mut next);
        std::mem::swap(&mut power, &mut next);
    }
    acc / horizon as f64
}

/// `Δ = lim_k P^{δk}` by repeated squaring of `P^δ` until the squaring is a
/// fixed point, `‖Q² - Q‖_max ≤ 1e-12`. Rows are renormalized after every
/// squaring so rounding cannot drift along the unit eigenvalue.
pub fn power_limit(p: &TransitionMatrix, period: usize) -> Result<DMatrix<f64>> {
    let mut current = matrix_power(p.matrix(), period);
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_LIMIT_MAX_SQUARINGS {
        let mut next = &current * &current;
        normalize_rows(&mut next);
        residual = max_abs_diff(&next, &current);
        current = next;
        if residual <= FIXED_POINT_TOL {
            return Ok(current);
        }
    }
    Err(Error::NoConvergence { iterations: POWER_LIMIT_MAX_SQUARINGS, residual })
}

/// `A^k` by binary exponentiation.
pub fn matrix_power(a: &DMatrix<f64>, mut k: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let mut result = DMatrix::identity(n, n);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

fn normalize_rows(a: &mut DMatrix<f64>) {
    for mut row in a.row_iter_mut() {
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            row /= s;
        }
    }
}

pub(crate) fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Checks that `pi` is a probability vector of length `m`.
pub fn validate_distribution(pi: &[f64], m: usize) -> Result<()> {
    if pi.len() != m {
        return Err(Error::InvalidDistribution(format!(
            "length {} does not match {m} states",
            pi.len()
        )));
    }
    if let Some((i, x)) = pi.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {} is {x}", i + 1)));
    }
    let sum: f64 = pi.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::InvalidDistribution(format!("sums to {sum}")));
    }
    Ok(())
}

/// `π^∞ = (π^0)ᵀ P̄`.
pub fn limiting_distribution(pi0: &[f64], decomp: &ChainDecomposition) -> Result<Vec<f64>> {
    validate_distribution(pi0, decomp.m())?;
    let row = DVector::from_column_slice(pi0).transpose() * &decomp.cesaro;
    Ok(row.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::super::decompose;
    use super::*;

    fn swap2() -> TransitionMatrix {
        TransitionMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn two_cycle_limits() {
        let d = decompose(&swap2()).unwrap();
        assert_eq!(d.global_period, 2);
        for x in d.cesaro.iter() {
            assert!((x - 0.5).abs() < 1e-15);
        }
        assert_eq!(d.power_limit, DMatrix::identity(2, 2));
    }

    #[test]
    fn identity_limits() {
        let d = decompose(&TransitionMatrix::identity(4)).unwrap();
        assert_eq!(d.cesaro, DMatrix::identity(4, 4));
        assert_eq!(d.power_limit, DMatrix::identity(4, 4));
        assert_eq!(cesaro_limit_oracle(&TransitionMatrix::identity(4), 17), DMatrix::identity(4, 4));
    }

    #[test]
    fn oracle_on_two_cycle() {
        let avg = cesaro_limit_oracle(&swap2(), 1000);
        for x in avg.iter() {
            assert!((x - 0.5).abs() < 1e-3);
        }
    }

    #[test]
    fn absorbing_start_is_fixed() {
        let p = TransitionMatrix::from_rows(&[
            vec![0.5, 0.5, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.3, 0.3, 0.4],
        ])
        .unwrap();
        let d = decompose(&p).unwrap();
        assert_eq!(limiting_distribution(&[0.0, 1.0, 0.0], &d).unwrap(), vec![0.0, 1.0, 0.0]);
        let from_transient = limiting_distribution(&[0.0, 0.0, 1.0], &d).unwrap();
        assert!((from_transient[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_errors() {
        let d = decompose(&swap2()).unwrap();
        assert!(matches!(
            limiting_distribution(&[1.0], &d),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            limiting_distribution(&[1.2, -0.2], &d),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            limiting_distribution(&[0.6, 0.6], &d),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn matrix_power_matches_repeated_product() {
        let p = TransitionMatrix::from_rows(&[
            vec![0.1, 0.9, 0.0],
            vec![0.0, 0.2, 0.8],
            vec![0.7, 0.0, 0.3],
        ])
        .unwrap();
        let mut direct = DMatrix::identity(3, 3);
        for _ in 0..13 {
            direct *= p.matrix();
        }
        assert!(max_abs_diff(&direct, &matrix_power(p.matrix(), 13)) < 1e-14);
    }

    #[test]
    fn singular_class_system_is_reported() {
        let lhs = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let rhs = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        assert!(matches!(solve(lhs, &rhs, "test"), Err(Error::SingularSolve(_))));
    }

    #[test]
    fn slow_mixing_power_limit_stays_stochastic() {
        let eps = 1e-6;
        let p = TransitionMatrix::from_rows(&[vec![1.0 - eps, eps], vec![eps, 1.0 - eps]]).unwrap();
        let delta = power_limit(&p, 1).unwrap();
        for x in delta.iter() {
            assert!((x - 0.5).abs() < 1e-10);
        }
    }
}
