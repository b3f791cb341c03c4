//! Total variation, Hellinger, relative entropy, Rényi and χ² divergences on
//! finite supports, the classical QoI inequalities built on them, and their
//! closed forms for IID product measures.
//!
//! Argument order follows the `D(Q ‖ P)` convention: the first argument is
//! the alternative model `Q`, the second the reference model `P`. The
//! symmetric distances take `(Q, P)` too so call sites read uniformly.
//!
//! Entropic sums use `0 · log(0 / p) = 0`. When `Q` puts mass where `P` has
//! none, the checked functions return [`Error::Undefined`]; the `_extended`
//! variants return `+∞` instead.

use crate::distribution::{DiscreteDistribution, Observable};
use crate::error::{check_len, Error, Result};
use crate::numeric::log_sum_exp_weighted;
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

/// Rényi orders closer to one than this are evaluated as relative entropy.
pub const RENYI_KL_WINDOW: f64 = 1e-6;

fn same_support(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Result<()> {
    check_len(p.len(), q.len())
}

/// First index where `Q_i > 0` but `P_i = 0`.
fn continuity_violation(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Option<usize> {
    q.weights()
        .iter()
        .zip(p.weights())
        .position(|(qi, pi)| *qi > 0.0 && *pi == 0.0)
}

fn mutual_violation(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Option<usize> {
    q.weights()
        .iter()
        .zip(p.weights())
        .position(|(qi, pi)| (*qi > 0.0) != (*pi > 0.0))
}

/// `½ Σ |Q_i − P_i|`.
pub fn total_variation(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Result<f64> {
    same_support(q, p)?;
    let s: f64 = q
        .weights()
        .iter()
        .zip(p.weights())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(0.5 * s)
}

/// `R(Q ‖ P) = Σ Q_i log(Q_i / P_i)`.
pub fn relative_entropy(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Result<f64> {
    same_support(q, p)?;
    if let Some(index) = continuity_violation(q, p) {
        return Err(Error::Undefined { index });
    }
    Ok(kl_sum(q, p))
}

/// As [`relative_entropy`] but `+∞` when `Q` is not absolutely continuous
/// with respect to `P`.
pub fn relative_entropy_extended(
    q: &DiscreteDistribution,
    p: &DiscreteDistribution,
) -> Result<f64> {
    same_support(q, p)?;
    if continuity_violation(q, p).is_some() {
        return Ok(f64::INFINITY);
    }
    Ok(kl_sum(q, p))
}

fn kl_sum(q: &DiscreteDistribution, p: &DiscreteDistribution) -> f64 {
    let s: f64 = q
        .weights()
        .iter()
        .zip(p.weights())
        .filter(|(qi, _)| **qi > 0.0)
        .map(|(qi, pi)| qi * (qi / pi).ln())
        .sum();
    s.max(0.0)
}

/// `D_α(Q ‖ P) = (α − 1)⁻¹ log Σ Q_i^α P_i^{1−α}` for `α > 0, α ≠ 1`.
pub fn renyi_divergence(
    q: &DiscreteDistribution,
    p: &DiscreteDistribution,
    alpha: f64,
) -> Result<f64> {
    check_renyi_order(alpha)?;
    same_support(q, p)?;
    if let Some(index) = mutual_violation(q, p) {
        return Err(Error::Undefined { index });
    }
    if (alpha - 1.0).abs() < RENYI_KL_WINDOW {
        return Ok(kl_sum(q, p));
    }
    if q == p {
        return Ok(0.0);
    }
    let log_mass = log_sum_exp_weighted(
        q.weights()
            .iter()
            .zip(p.weights())
            .filter(|(qi, _)| **qi > 0.0)
            .map(|(qi, pi)| (1.0, alpha * qi.ln() + (1.0 - alpha) * pi.ln())),
    );
    Ok((log_mass / (alpha - 1.0)).max(0.0))
}

pub(crate) fn check_renyi_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Parameter {
            name: "alpha",
            reason: "Rényi order must be positive and finite",
        });
    }
    if alpha == 1.0 {
        return Err(Error::Parameter {
            name: "alpha",
            reason: "Rényi order 1 is the relative entropy",
        });
    }
    Ok(())
}

/// `χ²(Q ‖ P) = Σ (Q_i − P_i)² / P_i`.
pub fn chi_squared(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Result<f64> {
    same_support(q, p)?;
    if let Some(index) = continuity_violation(q, p) {
        return Err(Error::Undefined { index });
    }
    Ok(chi2_sum(q, p))
}

pub fn chi_squared_extended(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Result<f64> {
    same_support(q, p)?;
    if continuity_violation(q, p).is_some() {
        return Ok(f64::INFINITY);
    }
    Ok(chi2_sum(q, p))
}

fn chi2_sum(q: &DiscreteDistribution, p: &DiscreteDistribution) -> f64 {
    q.weights()
        .iter()
        .zip(p.weights())
        .filter(|(_, pi)| **pi > 0.0)
        .map(|(qi, pi)| (qi - pi) * (qi - pi) / pi)
        .sum()
}

/// `H(Q, P) = (Σ (√Q_i − √P_i)²)^{1/2}`, in `[0, √2]`.
pub fn hellinger(q: &DiscreteDistribution, p: &DiscreteDistribution) -> Result<f64> {
    same_support(q, p)?;
    let s: f64 = q
        .weights()
        .iter()
        .zip(p.weights())
        .map(|(a, b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    Ok(s.sqrt())
}

/// All five divergences for one ordered pair, plus the two Rényi orders
/// that appear in the chain `H² ≤ D_{1/2} ≤ R ≤ D_2 ≤ χ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    pub tv: f64,
    pub hellinger: f64,
    pub kl: f64,
    pub renyi_alpha: f64,
    pub renyi: f64,
    pub renyi_half: f64,
    pub renyi_two: f64,
    pub chi2: f64,
}

impl DivergenceReport {
    pub fn compute(q: &DiscreteDistribution, p: &DiscreteDistribution, alpha: f64) -> Result<Self> {
        Ok(Self {
            tv: total_variation(q, p)?,
            hellinger: hellinger(q, p)?,
            kl: relative_entropy(q, p)?,
            renyi_alpha: alpha,
            renyi: renyi_divergence(q, p, alpha)?,
            renyi_half: renyi_divergence(q, p, 0.5)?,
            renyi_two: renyi_divergence(q, p, 2.0)?,
            chi2: chi_squared(q, p)?,
        })
    }

    /// Checks `H² ≤ D_{1/2} ≤ R ≤ D_2 ≤ χ²` up to `tol`.
    pub fn chain_holds(&self, tol: f64) -> bool {
        let h2 = self.hellinger * self.hellinger;
        h2 <= self.renyi_half + tol
            && self.renyi_half <= self.kl + tol
            && self.kl <= self.renyi_two + tol
            && self.renyi_two <= self.chi2 + tol
    }
}

/// Half-widths `B` with `|E_Q f − E_P f| ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalBounds {
    /// Csiszár–Kullback–Pinsker: `‖f‖∞ √(2R)`.
    pub ckp: f64,
    /// Generalized Pinsker `‖f‖∞ √(2 D_α / α)`; only valid for `0 < α ≤ 1`.
    pub pinsker: Option<f64>,
    /// Scheffé: `‖f‖∞ (2 − e^{−R})`.
    pub scheffe: f64,
    /// Chapman–Robbins: `√Var_P f · √χ²`.
    pub chapman_robbins: f64,
    /// Le Cam: `2 ‖f‖∞ H √(1 − H²/4)`.
    pub le_cam: f64,
    /// Hellinger with the optimal control-variate shift:
    /// `√2 H √(Var_P f + Var_Q f + ½ (E_Q f − E_P f)²)`.
    pub hellinger_improved: f64,
}

impl ClassicalBounds {
    /// The finite half-widths in a fixed order, for bulk checks.
    pub fn all(&self) -> impl Iterator<Item = f64> + '_ {
        [
            Some(self.ckp),
            self.pinsker,
            Some(self.scheffe),
            Some(self.chapman_robbins),
            Some(self.le_cam),
            Some(self.hellinger_improved),
        ]
        .into_iter()
        .flatten()
    }
}

pub fn classical_qoi_bounds(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    f: &Observable,
    alpha: Option<f64>,
) -> Result<ClassicalBounds> {
    same_support(q, p)?;
    check_len(p.len(), f.len())?;
    let sup = f.sup_norm();
    let kl = relative_entropy(q, p)?;
    let chi2 = chi_squared(q, p)?;
    let h = hellinger(q, p)?;
    let pinsker = match alpha {
        Some(a) if a > 0.0 && a <= 1.0 => {
            let d = if (a - 1.0).abs() < RENYI_KL_WINDOW {
                kl
            } else {
                renyi_divergence(q, p, a)?
            };
            Some(sup * (2.0 * d / a).sqrt())
        }
        Some(a) => {
            check_renyi_order(a)?;
            None
        }
        None => None,
    };
    let var_p = p.variance(f)?;
    let var_q = q.variance(f)?;
    let gap = q.expectation(f)? - p.expectation(f)?;
    Ok(ClassicalBounds {
        ckp: sup * (2.0 * kl).sqrt(),
        pinsker,
        scheffe: sup * (2.0 - (-kl).exp()),
        chapman_robbins: var_p.sqrt() * chi2.sqrt(),
        le_cam: 2.0 * sup * h * (1.0 - 0.25 * h * h).max(0.0).sqrt(),
        hellinger_improved: core::f64::consts::SQRT_2
            * h
            * (var_p + var_q + 0.5 * gap * gap).sqrt(),
    })
}

/// The unshifted Hellinger bound `√2 H √(E_P f² + E_Q f²)`.
pub fn hellinger_unshifted_bound(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    f: &Observable,
) -> Result<f64> {
    same_support(q, p)?;
    check_len(p.len(), f.len())?;
    let second = |d: &DiscreteDistribution| -> f64 {
        d.weights()
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * v * v)
            .sum()
    };
    Ok(core::f64::consts::SQRT_2 * hellinger(q, p)? * (second(p) + second(q)).sqrt())
}

/// Divergences between the `n`-fold products `Q^{⊗n}` and `P^{⊗n}`, computed
/// from single-site values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductDivergences {
    pub n: usize,
    pub kl: f64,
    pub renyi_alpha: f64,
    pub renyi: f64,
    /// `(1 + χ²)^n − 1`; may be `+∞` when the power overflows.
    pub chi2: f64,
    /// `log(1 + χ²_n) = n log(1 + χ²)`, always finite.
    pub chi2_log1p: f64,
    pub hellinger: f64,
}

pub fn iid_scaled_divergences(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    n: usize,
    alpha: f64,
) -> Result<ProductDivergences> {
    if n == 0 {
        return Err(Error::Parameter {
            name: "n",
            reason: "must be at least 1",
        });
    }
    let kl = relative_entropy(q, p)?;
    let renyi = renyi_divergence(q, p, alpha)?;
    let chi2 = chi_squared(q, p)?;
    let h = hellinger(q, p)?;
    let nf = n as f64;
    let chi2_log1p = nf * chi2.ln_1p();
    let affinity = (1.0 - 0.5 * h * h).max(0.0);
    let exponent = i32::try_from(n).unwrap_or(i32::MAX);
    let hellinger_n = (2.0 - 2.0 * affinity.powi(exponent)).max(0.0).sqrt();
    Ok(ProductDivergences {
        n,
        kl: nf * kl,
        renyi_alpha: alpha,
        renyi: nf * renyi,
        chi2: chi2_log1p.exp_m1(),
        chi2_log1p,
        hellinger: hellinger_n,
    })
}
