//! Weighted sums of convex components over a box.

mod file;
mod noise;

use std::fmt::Debug;
use std::sync::Arc;

pub use file::{ProblemFile, SparseRow};
pub use noise::NoiseModel;

use crate::markov::{limiting_distribution, ChainDecomposition, STOCHASTIC_TOL};
use crate::{Error, Result};

/// A convex function with a subgradient oracle.
pub trait Component: Debug + Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Writes a subgradient at `x` into `out`.
    fn subgradient_into(&self, x: &[f64], out: &mut [f64]);

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.subgradient_into(x, &mut g);
        g
    }

    /// Upper bound on `‖g(x)‖` over all `x`, if the component knows one.
    fn subgradient_bound(&self) -> Option<f64> {
        None
    }
}

/// `x ↦ |aᵀx - b|`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Component {
    a: Vec<f64>,
    b: f64,
    // nonzero coordinates of `a`
    support: Vec<usize>,
}

impl L1Component {
    pub fn new(a: Vec<f64>, b: f64) -> Self {
        let support = a.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, _)| j).collect();
        Self { a, b, support }
    }

    pub fn row(&self) -> &[f64] {
        &self.a
    }

    pub fn offset(&self) -> f64 {
        self.b
    }

    pub fn residual(&self, x: &[f64]) -> f64 {
        self.support.iter().map(|&j| self.a[j] * x[j]).sum::<f64>() - self.b
    }
}

impl Component for L1Component {
    fn value(&self, x: &[f64]) -> f64 {
        self.residual(x).abs()
    }

    /// `a` when the residual is positive, `-a` when negative, and exactly zero
    /// on the kink.
    fn subgradient_into(&self, x: &[f64], out: &mut [f64]) {
        let r = self.residual(x);
        out.iter_mut().for_each(|g| *g = 0.0);
        let sign = if r > 0.0 {
            1.0
        } else if r < 0.0 {
            -1.0
        } else {
            return;
        };
        for &j in &self.support {
            out[j] = sign * self.a[j];
        }
    }

    fn subgradient_bound(&self) -> Option<f64> {
        Some(self.a.iter().map(|v| v * v).sum::<f64>().sqrt())
    }
}

/// `{x : lower ≤ x ≤ upper}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl FeasibleBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "box bounds have lengths {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(Error::InvalidConfig(format!(
                    "coordinate {}: bounds [{l}, {u}] are not a nonempty compact interval",
                    j + 1
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| (l + u) / 2.0).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| l <= v && v <= u)
    }

    /// Euclidean projection: coordinatewise clamp.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        self.project_in_place(&mut y);
        y
    }

    pub fn project_in_place(&self, x: &mut [f64]) {
        for ((v, l), u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*l, *u);
        }
    }
}

/// `f(x) = Σ ω_i f_i(x)` over a box.
#[derive(Debug, Clone)]
pub struct ConvexSumProblem {
    components: Vec<Arc<dyn Component>>,
    feasible: FeasibleBox,
    weights: Vec<f64>,
}

impl ConvexSumProblem {
    pub fn new(
        components: Vec<Arc<dyn Component>>,
        feasible: FeasibleBox,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidConfig("no components".into()));
        }
        check_weights(&weights, components.len())?;
        Ok(Self { components, feasible, weights })
    }

    /// Builds an l1 residual problem `Σ ω_i |a_iᵀx - b_i|`.
    pub fn l1(rows: Vec<Vec<f64>>, b: &[f64], feasible: FeasibleBox, weights: Vec<f64>) -> Result<Self> {
        if rows.len() != b.len() {
            return Err(Error::InvalidConfig(format!("{} rows but {} offsets", rows.len(), b.len())));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != feasible.dim()) {
            return Err(Error::InvalidConfig(format!("row {} has wrong length", r + 1)));
        }
        let components = rows
            .into_iter()
            .zip(b)
            .map(|(a, &bi)| Arc::new(L1Component::new(a, bi)) as Arc<dyn Component>)
            .collect();
        Self::new(components, feasible, weights)
    }

    pub fn dim(&self) -> usize {
        self.feasible.dim()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, i: usize) -> &dyn Component {
        self.components[i].as_ref()
    }

    pub fn feasible(&self) -> &FeasibleBox {
        &self.feasible
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, self.components.len())?;
        self.weights = weights;
        Ok(self)
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.components
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w != 0.0)
            .map(|(c, w)| w * c.value(x))
            .sum()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.feasible.project(x)
    }

    /// Largest `‖g_i‖` bound reported by the components, if all report one.
    pub fn subgradient_bound(&self) -> Option<f64> {
        self.components
            .iter()
            .map(|c| c.subgradient_bound())
            .try_fold(0.0f64, |acc, b| b.map(|b| acc.max(b)))
    }
}

fn check_weights(weights: &[f64], m: usize) -> Result<()> {
    if weights.len() != m {
        return Err(Error::InvalidConfig(format!("{} weights for {m} components", weights.len())));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidConfig("weights must be nonnegative".into()));
    }
    let s: f64 = weights.iter().sum();
    if (s - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::InvalidConfig(format!("weights sum to {s}")));
    }
    Ok(())
}

/// `ω_i = (1/|M|) Σ_ℓ [π_ℓ^∞]_i`, the average Cesàro limiting distribution
/// over the chains' initial distributions. Transient states get zero weight.
pub fn weights_from_chains(initial_dists: &[Vec<f64>], decomp: &ChainDecomposition) -> Result<Vec<f64>> {
    if initial_dists.is_empty() {
        return Err(Error::InvalidDistribution("at least one chain is required".into()));
    }
    let mut omega = vec![0.0; decomp.m()];
    for pi0 in initial_dists {
        let limit = limiting_distribution(pi0, decomp)?;
        omega.iter_mut().zip(limit).for_each(|(w, p)| *w += p);
    }
    let count = initial_dists.len() as f64;
    omega.iter_mut().for_each(|w| *w /= count);
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_value_and_subgradient() {
        let c = L1Component::new(vec![1.0, 0.0], 0.0);
        assert_eq!(c.value(&[3.0, 5.0]), 3.0);
        assert_eq!(c.subgradient(&[3.0, 5.0]), vec![1.0, 0.0]);
        assert_eq!(c.subgradient(&[-3.0, 5.0]), vec![-1.0, 0.0]);
        assert_eq!(c.value(&[0.0, 5.0]), 0.0);
        assert_eq!(c.subgradient(&[0.0, 5.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn kink_returns_exact_zero() {
        let c = L1Component::new(vec![0.5, 0.25], 1.0);
        let x = [1.0, 2.0];
        assert_eq!(c.residual(&x), 0.0);
        assert!(c.subgradient(&x).iter().all(|g| *g == 0.0));
    }

    #[test]
    fn projection_clamps() {
        let b = FeasibleBox::new(vec![0.0, 0.1], vec![1.0, 2.0]).unwrap();
        assert_eq!(b.project(&[0.5, 1.0]), vec![0.5, 1.0]);
        assert_eq!(b.project(&[0.0, 0.0]), vec![0.0, 0.1]);
        assert_eq!(b.project(&[7.0, -3.0]), vec![1.0, 0.1]);
    }

    #[test]
    fn invalid_boxes() {
        assert!(FeasibleBox::new(vec![1.0], vec![0.0]).is_err());
        assert!(FeasibleBox::new(vec![0.0], vec![0.0, 1.0]).is_err());
        assert!(FeasibleBox::new(vec![f64::NEG_INFINITY], vec![0.0]).is_err());
        assert!(FeasibleBox::new(vec![0.5], vec![0.5]).is_ok());
    }

    #[test]
    fn objective_with_point_mass_weights() {
        let b = FeasibleBox::new(vec![-5.0; 2], vec![5.0; 2]).unwrap();
        let p = ConvexSumProblem::l1(
            vec![vec![1.0, 0.0], vec![0.0, 2.0]],
            &[1.0, 1.0],
            b,
            vec![0.0, 1.0],
        )
        .unwrap();
        assert_eq!(p.objective(&[3.0, 2.0]), 3.0);
        assert_eq!(p.subgradient_bound(), Some(2.0));
    }

    #[test]
    fn weights_are_validated() {
        let b = FeasibleBox::new(vec![0.0], vec![1.0]).unwrap();
        let rows = vec![vec![1.0], vec![2.0]];
        assert!(ConvexSumProblem::l1(rows.clone(), &[0.0, 0.0], b.clone(), vec![0.5, 0.6]).is_err());
        assert!(ConvexSumProblem::l1(rows.clone(), &[0.0, 0.0], b.clone(), vec![1.0]).is_err());
        assert!(ConvexSumProblem::l1(rows, &[0.0], b, vec![0.5, 0.5]).is_err());
    }
}
