use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Stepsize rules.
///
/// `DiminishingBlock` keeps the step constant on blocks of `period`
/// iterations: `λ_k = a / (⌊k/period⌋ + 1)^ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepsizeSchedule {
    DiminishingBlock { a: f64, xi: f64, period: usize },
    Constant { lambda: f64 },
}

impl StepsizeSchedule {
    pub fn diminishing(a: f64, xi: f64, period: usize) -> Result<Self> {
        let s = Self::DiminishingBlock { a, xi, period };
        s.validate()?;
        Ok(s)
    }

    pub fn constant(lambda: f64) -> Result<Self> {
        let s = Self::Constant { lambda };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::DiminishingBlock { a, xi, period } => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::InvalidParameters(format!("a = {a} must be positive")));
                }
                if !(xi > 2.0 / 3.0 && xi <= 1.0) {
                    return Err(Error::InvalidParameters(format!("xi = {xi} must lie in (2/3, 1]")));
                }
                if period == 0 {
                    return Err(Error::InvalidParameters("block length must be positive".into()));
                }
            }
            Self::Constant { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidParameters(format!("lambda = {lambda} must be positive")));
                }
            }
        }
        Ok(())
    }

    pub fn stepsize(&self, k: usize) -> f64 {
        match *self {
            Self::DiminishingBlock { a, xi, period } => a / ((k / period + 1) as f64).powf(xi),
            Self::Constant { lambda } => lambda,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_structure() {
        let s = StepsizeSchedule::diminishing(2.0, 0.7, 2).unwrap();
        assert_eq!(s.stepsize(0), 2.0);
        assert_eq!(s.stepsize(1), 2.0);
        let second = 2.0 / 2f64.powf(0.7);
        assert_eq!(s.stepsize(2), second);
        assert_eq!(s.stepsize(3), second);
        assert!(s.stepsize(4) < second);
    }

    #[test]
    fn harmonic_when_unit_block() {
        let s = StepsizeSchedule::diminishing(1.0, 1.0, 1).unwrap();
        for k in 0..50 {
            assert_eq!(s.stepsize(k), 1.0 / (k + 1) as f64);
        }
    }

    #[test]
    fn constant_is_constant() {
        let s = StepsizeSchedule::constant(1e-3).unwrap();
        assert!([0, 1, 99, 1_000_000].iter().all(|&k| s.stepsize(k) == 1e-3));
    }

    #[test]
    fn parameter_ranges() {
        assert!(StepsizeSchedule::diminishing(0.0, 0.7, 1).is_err());
        assert!(StepsizeSchedule::diminishing(1.0, 2.0 / 3.0, 1).is_err());
        assert!(StepsizeSchedule::diminishing(1.0, 0.667, 1).is_ok());
        assert!(StepsizeSchedule::diminishing(1.0, 1.01, 1).is_err());
        assert!(StepsizeSchedule::diminishing(1.0, 0.8, 0).is_err());
        assert!(StepsizeSchedule::constant(0.0).is_err());
        assert!(StepsizeSchedule::constant(f64::NAN).is_err());
    }
}
