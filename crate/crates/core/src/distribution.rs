//! Finite-support probability vectors and real-valued observables on them.

use alloc::vec::Vec;

use crate::error::{check_len, Error, Result};

/// Allowed deviation of the total mass from one at construction.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A probability vector over `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    weights: Vec<f64>,
}

impl DiscreteDistribution {
    /// Accepts weights that are nonnegative and already sum to one within
    /// [`NORMALIZATION_TOLERANCE`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::validate(&weights)?;
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution("weights do not sum to one"));
        }
        Ok(Self { weights })
    }

    /// Divides by the total mass first. Only used when the caller explicitly
    /// asks for renormalization.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        Self::validate(&weights)?;
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidDistribution("total mass is not positive"));
        }
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self { weights })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidDistribution("empty support"));
        }
        Ok(Self {
            weights: alloc::vec![1.0 / size as f64; size],
        })
    }

    fn validate(weights: &[f64]) -> Result<()> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty support"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and nonnegative",
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    /// `P_i > 0 ⇔ Q_i > 0` for every index.
    pub fn mutually_continuous(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| (*a > 0.0) == (*b > 0.0))
    }

    pub fn expectation(&self, f: &Observable) -> Result<f64> {
        check_len(self.len(), f.len())?;
        Ok(self
            .weights
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * v)
            .sum())
    }

    /// Variance computed around the mean, never as `E f² − (E f)²`.
    pub fn variance(&self, f: &Observable) -> Result<f64> {
        let mean = self.expectation(f)?;
        Ok(self
            .weights
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * (v - mean) * (v - mean))
            .sum())
    }

    /// Product measure `self ⊗ other`, outcomes ordered with `self` as the
    /// most significant coordinate.
    pub fn product(&self, other: &Self) -> Self {
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for a in &self.weights {
            for b in &other.weights {
                weights.push(a * b);
            }
        }
        Self { weights }
    }

    /// `n`-fold product measure by explicit enumeration.
    pub fn power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter {
                name: "n",
                reason: "must be at least 1",
            });
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.product(self);
        }
        Ok(out)
    }
}

/// A real function on a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    values: Vec<f64>,
}

impl Observable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidObservable("empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidObservable("values must be finite"));
        }
        Ok(Self { values })
    }

    pub fn constant(size: usize, value: f64) -> Result<Self> {
        Self::new(alloc::vec![value; size])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `x ↦ Σ_k g(x_k)` on the `n`-fold product space, in the same outcome
    /// order as [`DiscreteDistribution::power`].
    pub fn sum_over_product(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter {
                name: "n",
                reason: "must be at least 1",
            });
        }
        let mut out = self.values.clone();
        for _ in 1..n {
            let mut next = Vec::with_capacity(out.len() * self.len());
            for a in &out {
                for b in &self.values {
                    next.push(a + b);
                }
            }
            out = next;
        }
        Ok(Self { values: out })
    }
}
