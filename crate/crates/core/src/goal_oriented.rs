//! Cumulant generating functions and the goal-oriented divergences
//!
//! ```text
//! Ξ+(Q‖P; f) = inf_{c>0} (Λ̃(c) + R(Q‖P)) / c
//! Ξ−(Q‖P; f) = sup_{c>0} (−Λ̃(−c) − R(Q‖P)) / c
//! ```
//!
//! where `Λ̃(c) = log E_P exp(c (f − E_P f))`. They sandwich the QoI gap:
//! `Ξ− ≤ E_Q f − E_P f ≤ Ξ+`.

use alloc::vec::Vec;

use crate::distribution::{DiscreteDistribution, Observable};
use crate::divergences::relative_entropy;
use crate::error::{check_len, Error, Result};
use crate::numeric::log_sum_exp_weighted;
// Float math is not inherent on f64 in core; methods resolve through this trait.
use crate::optimize::minimize_positive;
#[allow(unused_imports)]
use num_traits::Float;

/// Step used for finite-difference second derivatives of a CGF at zero.
pub const VARIANCE_FD_STEP: f64 = 1e-4;

/// A centered cumulant generating function `c ↦ Λ̃(c)` on `(−c₀, c₀)`.
///
/// Implementations must be pure: the bound optimizers may call them from
/// several threads and in any order.
pub trait Cgf {
    /// `Λ̃(c)`. Outside `(−c₀, c₀)` this is an error, never a clamped value.
    fn centered(&self, c: f64) -> Result<f64>;

    /// `c₀`; `+∞` for bounded observables.
    fn domain_bound(&self) -> f64 {
        f64::INFINITY
    }

    /// `Λ̃''(0)`, the variance entering the linearized bound.
    fn variance(&self) -> Result<f64> {
        let h = VARIANCE_FD_STEP;
        Ok(((self.centered(h)? + self.centered(-h)?) / (h * h)).max(0.0))
    }
}

impl<T: Cgf + ?Sized> Cgf for &T {
    fn centered(&self, c: f64) -> Result<f64> {
        (**self).centered(c)
    }
    fn domain_bound(&self) -> f64 {
        (**self).domain_bound()
    }
    fn variance(&self) -> Result<f64> {
        (**self).variance()
    }
}

/// `Λ̃_{P,f}` of an observable under a finite distribution.
#[derive(Debug, Clone)]
pub struct EmpiricalCgf {
    weights: Vec<f64>,
    deviations: Vec<f64>,
    log_mass: f64,
    variance: f64,
    constant: bool,
}

impl EmpiricalCgf {
    pub fn new(p: &DiscreteDistribution, f: &Observable) -> Result<Self> {
        check_len(p.len(), f.len())?;
        let weights = p.weights().to_vec();
        let mass: f64 = weights.iter().sum();
        let mean = p.expectation(f)? / mass;
        let deviations: Vec<f64> = f.values().iter().map(|v| v - mean).collect();
        let variance = weights
            .iter()
            .zip(&deviations)
            .map(|(w, d)| w * d * d)
            .sum::<f64>()
            / mass;
        // Constant on the support of P, not merely everywhere.
        let mut on_support = weights
            .iter()
            .zip(f.values())
            .filter(|(w, _)| **w > 0.0)
            .map(|(_, v)| *v);
        let first = on_support.next();
        let constant = on_support.all(|v| Some(v) == first);
        Ok(Self {
            weights,
            deviations,
            log_mass: mass.ln(),
            variance: if constant { 0.0 } else { variance },
            constant,
        })
    }
}

impl Cgf for EmpiricalCgf {
    fn centered(&self, c: f64) -> Result<f64> {
        if c.is_nan() {
            return Err(Error::Domain {
                value: c,
                bound: f64::INFINITY,
            });
        }
        if c == 0.0 || self.constant {
            return Ok(0.0);
        }
        let lse = log_sum_exp_weighted(
            self.weights
                .iter()
                .zip(&self.deviations)
                .map(|(w, d)| (*w, c * d)),
        );
        Ok((lse - self.log_mass).max(0.0))
    }

    fn variance(&self) -> Result<f64> {
        Ok(self.variance)
    }
}

/// A caller-supplied `Λ̃` with a declared domain `(−c₀, c₀)`.
pub struct AnalyticCgf<F> {
    eval: F,
    bound: f64,
    variance: Option<f64>,
}

impl<F: Fn(f64) -> f64> AnalyticCgf<F> {
    pub fn new(eval: F, bound: f64) -> Result<Self> {
        if !(bound > 0.0) {
            return Err(Error::Parameter {
                name: "bound",
                reason: "domain must contain a neighborhood of zero",
            });
        }
        Ok(Self {
            eval,
            bound,
            variance: None,
        })
    }

    /// Supplies `Λ̃''(0)` exactly instead of by finite differences.
    pub fn with_variance(mut self, variance: f64) -> Self {
        self.variance = Some(variance);
        self
    }
}

impl<F: Fn(f64) -> f64> Cgf for AnalyticCgf<F> {
    fn centered(&self, c: f64) -> Result<f64> {
        if !(c.abs() < self.bound) {
            return Err(Error::Domain {
                value: c,
                bound: self.bound,
            });
        }
        Ok((self.eval)(c))
    }

    fn domain_bound(&self) -> f64 {
        self.bound
    }

    fn variance(&self) -> Result<f64> {
        match self.variance {
            Some(v) => Ok(v),
            None => {
                let h = VARIANCE_FD_STEP.min(0.5 * self.bound);
                Ok(((self.centered(h)? + self.centered(-h)?) / (h * h)).max(0.0))
            }
        }
    }
}

/// `Λ̃_{P,f}(c)` for a finite distribution.
pub fn centered_cgf(p: &DiscreteDistribution, f: &Observable, c: f64) -> Result<f64> {
    EmpiricalCgf::new(p, f)?.centered(c)
}

/// Two-sided goal-oriented bound together with its optimizers.
///
/// `c_star_*` are the optimizing `c`. In the degenerate cases `R = 0` or
/// `Var = 0` the bound is the `c → 0⁺` limit and they are reported as `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalBound {
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub c_star_plus: f64,
    pub c_star_minus: f64,
    pub linearized_half_width: f64,
}

impl GoalBound {
    pub const ZERO: Self = Self {
        xi_plus: 0.0,
        xi_minus: 0.0,
        c_star_plus: 0.0,
        c_star_minus: 0.0,
        linearized_half_width: 0.0,
    };

    pub fn contains(&self, gap: f64, tol: f64) -> bool {
        self.xi_minus - tol <= gap && gap <= self.xi_plus + tol
    }

    /// Divides every bound by `n`, leaving the optimizers in place.
    pub fn per_site(self, n: f64) -> Self {
        Self {
            xi_plus: self.xi_plus / n,
            xi_minus: self.xi_minus / n,
            linearized_half_width: self.linearized_half_width / n,
            ..self
        }
    }
}

fn check_entropy(relative_entropy_value: f64) -> Result<()> {
    if !(relative_entropy_value >= 0.0) || !relative_entropy_value.is_finite() {
        return Err(Error::Parameter {
            name: "relative_entropy",
            reason: "must be finite and nonnegative",
        });
    }
    Ok(())
}

/// `Ξ±` for a given CGF and relative-entropy value.
pub fn xi_bounds<C: Cgf + ?Sized>(source: &C, relative_entropy_value: f64) -> Result<GoalBound> {
    check_entropy(relative_entropy_value)?;
    let variance = source.variance()?;
    if relative_entropy_value == 0.0 || variance == 0.0 {
        return Ok(GoalBound::ZERO);
    }
    let r = relative_entropy_value;
    let bound = source.domain_bound();
    let plus = minimize_positive(
        |c| match source.centered(c) {
            Ok(l) => (l + r) / c,
            Err(_) => f64::INFINITY,
        },
        bound,
    )?;
    let minus = minimize_positive(
        |c| match source.centered(-c) {
            Ok(l) => (l + r) / c,
            Err(_) => f64::INFINITY,
        },
        bound,
    )?;
    Ok(GoalBound {
        xi_plus: plus.value.max(0.0),
        xi_minus: -minus.value.max(0.0),
        c_star_plus: plus.argmin,
        c_star_minus: minus.argmin,
        linearized_half_width: linearized_half_width(variance, r),
    })
}

/// `√Var · √(2R)`, the leading term of `Ξ±` for small `R`.
pub fn linearized_half_width(variance: f64, relative_entropy_value: f64) -> f64 {
    variance.max(0.0).sqrt() * (2.0 * relative_entropy_value.max(0.0)).sqrt()
}

/// `Ξ±(Q‖P; f)` with `R(Q‖P)` computed from the two distributions.
pub fn goal_bound(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    f: &Observable,
) -> Result<GoalBound> {
    let r = relative_entropy(q, p)?;
    xi_bounds(&EmpiricalCgf::new(p, f)?, r)
}

/// Per-site bound `Ξ±(Q^{⊗n} ‖ P^{⊗n}; Σ_k g(x_k)) / n`.
///
/// Both the CGF and the relative entropy of a product measure are `n` times
/// their single-site values, so the per-site bound is the single-site bound
/// and no product space is built.
pub fn xi_tensorized(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    g: &Observable,
    n: usize,
) -> Result<GoalBound> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            reason: "must be at least 1",
        });
    }
    goal_bound(p, q, g)
}

/// An exponential family `dP^θ/dP⁰ = exp(t(x)·θ − F(θ))` through its
/// log-normalizer `F` and gradient `∇F(θ) = E_θ t`.
pub trait ExponentialFamily {
    fn dimension(&self) -> usize;

    fn log_normalizer(&self, theta: &[f64]) -> Result<f64>;

    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>>;

    fn in_domain(&self, theta: &[f64]) -> bool {
        theta.len() == self.dimension() && theta.iter().all(|t| t.is_finite())
    }
}

/// Categorical distributions on `{0, .., k−1}` with natural parameters
/// `θ_j` for outcomes `1..k` (outcome `0` is the reference):
/// `F(θ) = log(1 + Σ_j e^{θ_j})`. With `k = 2` this is the Bernoulli family
/// `F(θ) = log(1 + e^θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Categorical {
    outcomes: usize,
}

impl Categorical {
    pub fn new(outcomes: usize) -> Result<Self> {
        if outcomes < 2 {
            return Err(Error::Parameter {
                name: "outcomes",
                reason: "need at least two outcomes",
            });
        }
        Ok(Self { outcomes })
    }

    pub fn bernoulli() -> Self {
        Self { outcomes: 2 }
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        check_len(self.dimension(), theta.len())?;
        if !self.in_domain(theta) {
            return Err(Error::Parameter {
                name: "theta",
                reason: "natural parameters must be finite",
            });
        }
        Ok(())
    }

    /// The member with natural parameter `θ`.
    pub fn distribution(&self, theta: &[f64]) -> Result<DiscreteDistribution> {
        self.check(theta)?;
        let log_z = self.log_normalizer(theta)?;
        let mut w = Vec::with_capacity(self.outcomes);
        w.push((-log_z).exp());
        w.extend(theta.iter().map(|t| (t - log_z).exp()));
        DiscreteDistribution::normalized(w)
    }

    /// The observable `x ↦ t(x)·v`.
    pub fn linear_statistic(&self, direction: &[f64]) -> Result<Observable> {
        check_len(self.dimension(), direction.len())?;
        let mut values = Vec::with_capacity(self.outcomes);
        values.push(0.0);
        values.extend_from_slice(direction);
        Observable::new(values)
    }
}

impl ExponentialFamily for Categorical {
    fn dimension(&self) -> usize {
        self.outcomes - 1
    }

    fn log_normalizer(&self, theta: &[f64]) -> Result<f64> {
        self.check(theta)?;
        Ok(log_sum_exp_weighted(
            core::iter::once((1.0, 0.0)).chain(theta.iter().map(|t| (1.0, *t))),
        ))
    }

    fn gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let log_z = self.log_normalizer(theta)?;
        Ok(theta.iter().map(|t| (t - log_z).exp()).collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `R(P^{θ'} ‖ P^θ) = (θ' − θ)·∇F(θ') + F(θ) − F(θ')`.
pub fn expfam_relative_entropy<E: ExponentialFamily + ?Sized>(
    family: &E,
    theta_alt: &[f64],
    theta: &[f64],
) -> Result<f64> {
    check_len(family.dimension(), theta_alt.len())?;
    check_len(family.dimension(), theta.len())?;
    let grad = family.gradient(theta_alt)?;
    let diff: Vec<f64> = theta_alt.iter().zip(theta).map(|(a, b)| a - b).collect();
    let value =
        dot(&diff, &grad) + family.log_normalizer(theta)? - family.log_normalizer(theta_alt)?;
    Ok(value.max(0.0))
}

/// `Λ̃(c) = F(θ + cv) − F(θ) − c v·∇F(θ)` for the observable `t·v`.
struct FamilyCgf<'a, E: ?Sized> {
    family: &'a E,
    theta: &'a [f64],
    direction: &'a [f64],
    log_z: f64,
    slope: f64,
}

impl<E: ExponentialFamily + ?Sized> Cgf for FamilyCgf<'_, E> {
    fn centered(&self, c: f64) -> Result<f64> {
        let shifted: Vec<f64> = self
            .theta
            .iter()
            .zip(self.direction)
            .map(|(t, v)| t + c * v)
            .collect();
        if !self.family.in_domain(&shifted) {
            return Err(Error::Domain {
                value: c,
                bound: f64::NAN,
            });
        }
        Ok(self.family.log_normalizer(&shifted)? - self.log_z - c * self.slope)
    }
}

/// `Ξ±(P^{θ'} ‖ P^θ; t·v)` from the log-normalizer alone.
pub fn expfam_xi_bounds<E: ExponentialFamily + ?Sized>(
    family: &E,
    theta_alt: &[f64],
    theta: &[f64],
    direction: &[f64],
) -> Result<GoalBound> {
    check_len(family.dimension(), direction.len())?;
    let r = expfam_relative_entropy(family, theta_alt, theta)?;
    let grad = family.gradient(theta)?;
    let cgf = FamilyCgf {
        family,
        theta,
        direction,
        log_z: family.log_normalizer(theta)?,
        slope: dot(direction, &grad),
    };
    let probe = 1e-12;
    if cgf.centered(probe).is_err() && cgf.centered(-probe).is_err() {
        return Err(Error::Domain {
            value: probe,
            bound: 0.0,
        });
    }
    xi_bounds(&cgf, r)
}
