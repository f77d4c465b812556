use crate::markov::TransitionMatrix;
use crate::{Error, Result};

/// Selection rules of the classical incremental methods, as Markov chains.
/// States and neighbor indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum BaselineKind {
    /// `i -> i+1`, wrapping around, starting from the first state.
    Cyclic,
    /// Every transition has probability `1/m`, uniform start.
    UniformRandom,
    /// Move to each neighbor with probability `1/m`, stay otherwise.
    EqualProbability { neighbors: Vec<Vec<usize>>, start: usize },
}

/// Transition matrix and initial distribution of a baseline rule.
pub fn make_baseline(kind: &BaselineKind, m: usize) -> Result<(TransitionMatrix, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidParameters("baseline needs at least one state".into()));
    }
    let unit = |s: usize| {
        let mut v = vec![0.0; m];
        v[s] = 1.0;
        v
    };
    let mf = m as f64;
    match kind {
        BaselineKind::Cyclic => {
            let rows: Vec<Vec<f64>> = (0..m).map(|i| unit((i + 1) % m)).collect();
            Ok((TransitionMatrix::from_rows(&rows)?, unit(0)))
        }
        BaselineKind::UniformRandom => {
            let rows = vec![vec![1.0 / mf; m]; m];
            Ok((TransitionMatrix::from_rows(&rows)?, vec![1.0 / mf; m]))
        }
        BaselineKind::EqualProbability { neighbors, start } => {
            if neighbors.len() != m {
                return Err(Error::InvalidNeighbors(format!("{} neighbor sets for {m} states", neighbors.len())));
            }
            if *start >= m {
                return Err(Error::InvalidNeighbors(format!("start state {} out of range", start + 1)));
            }
            let mut rows = vec![vec![0.0; m]; m];
            for (i, set) in neighbors.iter().enumerate() {
                if set.len() > m - 1 {
                    return Err(Error::InvalidNeighbors(format!("state {} has {} neighbors", i + 1, set.len())));
                }
                for &j in set {
                    if j == i {
                        return Err(Error::InvalidNeighbors(format!("state {} lists itself", i + 1)));
                    }
                    if j >= m {
                        return Err(Error::InvalidNeighbors(format!("state {} lists unknown state {}", i + 1, j + 1)));
                    }
                    if rows[i][j] != 0.0 {
                        return Err(Error::InvalidNeighbors(format!("state {} lists {} twice", i + 1, j + 1)));
                    }
                    rows[i][j] = 1.0 / mf;
                }
                rows[i][i] = 1.0 - set.len() as f64 / mf;
            }
            Ok((TransitionMatrix::from_rows(&rows)?, unit(*start)))
        }
    }
}
