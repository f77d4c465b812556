use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ChainDecomposition, TransitionMatrix};
use crate::{Error, Result};

/// Parses `m` followed by `m` lines of `m` whitespace-separated decimals.
pub fn parse_matrix(text: &str) -> Result<TransitionMatrix> {
    let mut tokens = text.split_whitespace();
    let m: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("state count: {e}")))?;
    let values = parse_decimals(tokens)?;
    if values.len() != m * m {
        return Err(Error::Parse(format!("expected {} entries, found {}", m * m, values.len())));
    }
    let rows: Vec<Vec<f64>> = values.chunks(m.max(1)).map(<[f64]>::to_vec).collect();
    TransitionMatrix::from_rows(&rows)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<TransitionMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

/// Parses whitespace-separated probabilities, one per state.
pub fn parse_distribution(text: &str) -> Result<Vec<f64>> {
    parse_decimals(text.split_whitespace())
}

pub fn read_distribution(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_distribution(&std::fs::read_to_string(path)?)
}

fn parse_decimals<'a>(tokens: impl Iterator<Item = &'a str>) -> Result<Vec<f64>> {
    tokens
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
        .collect()
}

/// JSON form of a decomposition, with 1-based states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub classes: Vec<Vec<usize>>,
    pub periods: Vec<usize>,
    pub transient: Vec<usize>,
    pub delta: usize,
}

impl From<&ChainDecomposition> for DecompositionReport {
    fn from(d: &ChainDecomposition) -> Self {
        let one_based = |v: &[usize]| v.iter().map(|s| s + 1).collect::<Vec<_>>();
        Self {
            classes: d.classes.iter().map(|c| one_based(c)).collect(),
            periods: d.class_periods.clone(),
            transient: one_based(&d.transient),
            delta: d.global_period,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::decompose;
    use super::*;

    #[test]
    fn parses_plain_text_matrix() {
        let p = parse_matrix("2\n0 1\n1 0\n").unwrap();
        assert_eq!(p.to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn rejects_short_and_garbage_input() {
        assert!(matches!(parse_matrix("2\n0 1\n1\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("2\n0 1\nx 0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(""), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("2\n0.5 0.6\n0 1\n"), Err(Error::RowSumViolation { row: 1, .. })));
    }

    #[test]
    fn report_is_one_based() {
        let p = parse_matrix("3\n0.5 0.5 0\n0 1 0\n0 0 1\n").unwrap();
        let report = DecompositionReport::from(&decompose(&p).unwrap());
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(json, r#"{"classes":[[2],[3]],"periods":[1,1],"transient":[1],"delta":1}"#);
    }
}
