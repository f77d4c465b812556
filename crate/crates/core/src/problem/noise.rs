use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Additive subgradient error models, one i.i.d. draw per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "scale", rename_all = "snake_case")]
pub enum NoiseModel {
    Zero,
    /// `U(0, 1/k)` at iteration index `k ≥ 1`.
    UniformDecaying,
    /// `c · U(0, 1)`.
    UniformScaled(f64),
    /// `c · N(0, 1)`.
    NormalScaled(f64),
}

impl NoiseModel {
    /// The noise used by the numbered tests of the l1 study.
    pub fn for_test(test: u32) -> Result<Self> {
        Ok(match test {
            1 => Self::Zero,
            2 => Self::UniformDecaying,
            3 => Self::UniformScaled(0.1),
            4 => Self::UniformScaled(0.01),
            5 => Self::NormalScaled(0.1),
            6 => Self::NormalScaled(0.01),
            other => return Err(Error::UnknownTest(other)),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::UniformScaled(c) | Self::NormalScaled(c) if !(c.is_finite() && c >= 0.0) => {
                Err(Error::InvalidParameters(format!("noise scale {c} must be finite and nonnegative")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero) || matches!(self, Self::UniformScaled(c) | Self::NormalScaled(c) if *c == 0.0)
    }

    /// Per-coordinate bound `ν_k`.
    pub fn nu(&self, k: u64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::UniformDecaying => 1.0 / k.max(1) as f64,
            Self::UniformScaled(c) | Self::NormalScaled(c) => c,
        }
    }

    /// Whether `Σ_k ν_k / (k+1)^ξ` is finite for every admissible `ξ > 2/3`.
    pub fn is_summable(&self) -> bool {
        matches!(self, Self::Zero | Self::UniformDecaying) || self.is_zero()
    }

    /// Same model with its scale multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            Self::UniformScaled(c) => Self::UniformScaled(c * factor),
            Self::NormalScaled(c) => Self::NormalScaled(c * factor),
            other => other,
        }
    }

    /// Fills `out` with the error vector for iteration index `k ≥ 1`.
    pub fn sample_into<R: Rng + ?Sized>(&self, k: u64, rng: &mut R, out: &mut [f64]) {
        match *self {
            Self::Zero => out.iter_mut().for_each(|e| *e = 0.0),
            Self::UniformDecaying => {
                let width = 1.0 / k.max(1) as f64;
                out.iter_mut().for_each(|e| *e = width * rng.gen::<f64>());
            }
            Self::UniformScaled(c) => out.iter_mut().for_each(|e| *e = c * rng.gen::<f64>()),
            Self::NormalScaled(c) => out.iter_mut().for_each(|e| {
                let z: f64 = rng.sample(StandardNormal);
                *e = c * z;
            }),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, k: u64, n: usize, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; n];
        self.sample_into(k, rng, &mut out);
        out
    }
}
