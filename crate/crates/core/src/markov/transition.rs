use nalgebra::DMatrix;

use super::STOCHASTIC_TOL;
use crate::{Error, Result};

/// A validated row-stochastic square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    p: DMatrix<f64>,
    // row-major copy for sampling
    flat: Vec<f64>,
}

impl TransitionMatrix {
    /// Checks that `raw` is square, finite, nonnegative and row-stochastic
    /// within [`STOCHASTIC_TOL`]. Entries are kept as given.
    pub fn new(raw: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = raw.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        for i in 0..rows {
            let mut sum = 0.0;
            for j in 0..cols {
                let v = raw[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i + 1, col: j + 1 });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { row: i + 1, col: j + 1, value: v });
                }
                sum += v;
            }
            let deviation = sum - 1.0;
            if deviation.abs() > STOCHASTIC_TOL {
                return Err(Error::RowSumViolation { row: i + 1, deviation });
            }
        }
        Ok(Self::wrap(raw))
    }

    fn wrap(p: DMatrix<f64>) -> Self {
        let m = p.nrows();
        let flat = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|ij| p[ij]).collect();
        Self { p, flat }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::NotSquare { rows: m, cols: bad.len() });
        }
        Self::new(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
    }

    pub fn identity(m: usize) -> Self {
        Self::wrap(DMatrix::identity(m, m))
    }

    /// Number of states.
    pub fn m(&self) -> usize {
        self.p.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.m();
        &self.flat[i * m..(i + 1) * m]
    }

    /// Successors of `i` in the support graph.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m()).filter(move |&j| self.flat[i * self.m() + j] > 0.0)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.m()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Relabels states: new state `perm[i]` is old state `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let m = self.m();
        let mut q = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                q[(perm[i], perm[j])] = self.p[(i, j)];
            }
        }
        Self::wrap(q)
    }
}
