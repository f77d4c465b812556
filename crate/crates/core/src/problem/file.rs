use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConvexSumProblem, FeasibleBox};
use crate::{Error, Result};

/// One sparse row: `i` and its nonzero `[j, a_ij]` pairs, 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseRow {
    pub i: usize,
    pub entries: Vec<(usize, f64)>,
}

/// On-disk l1 residual problem, 1-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    pub rows: Vec<SparseRow>,
    pub b: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ProblemFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    /// Dense rows, ordered by `i`.
    pub fn dense_rows(&self) -> Result<Vec<Vec<f64>>> {
        let m = self.rows.len();
        let mut dense = vec![vec![0.0; self.n]; m];
        let mut seen = vec![false; m];
        for row in &self.rows {
            if row.i == 0 || row.i > m || seen[row.i - 1] {
                return Err(Error::Parse(format!("row index {} is out of range or repeated", row.i)));
            }
            seen[row.i - 1] = true;
            for &(j, v) in &row.entries {
                if j == 0 || j > self.n {
                    return Err(Error::Parse(format!("row {}: column {j} out of range 1..={}", row.i, self.n)));
                }
                dense[row.i - 1][j - 1] = v;
            }
        }
        Ok(dense)
    }

    pub fn feasible(&self) -> Result<FeasibleBox> {
        if self.lower.len() != self.n {
            return Err(Error::Parse(format!("lower has {} entries, n = {}", self.lower.len(), self.n)));
        }
        FeasibleBox::new(self.lower.clone(), self.upper.clone())
    }

    pub fn into_problem(&self, weights: Vec<f64>) -> Result<ConvexSumProblem> {
        ConvexSumProblem::l1(self.dense_rows()?, &self.b, self.feasible()?, weights)
    }

    /// Sparse file form of dense rows; zero entries are dropped.
    pub fn from_dense(rows: &[Vec<f64>], b: Vec<f64>, feasible: &FeasibleBox) -> Self {
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, r)| SparseRow {
                i: i + 1,
                entries: r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j + 1, *v)).collect(),
            })
            .collect();
        Self {
            n: feasible.dim(),
            rows,
            b,
            lower: feasible.lower().to_vec(),
            upper: feasible.upper().to_vec(),
        }
    }
}
