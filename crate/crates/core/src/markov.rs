//! Divergence rates between stationary Markov chains and the rate-level
//! goal-oriented bounds
//!
//! ```text
//! ξ+(q‖p; g) = inf_{c>0} (λ_{p,g}(c) + r(q‖p)) / c
//! ξ−(q‖p; g) = sup_{c>0} (−λ_{p,g}(−c) − r(q‖p)) / c
//! ```
//!
//! with `λ_{p,g}(c)` the log Perron root of `p(x,y) e^{c(g(y) − E_{μp} g)}`
//! and `r` the relative entropy rate.

use alloc::vec;
use alloc::vec::Vec;

use crate::distribution::{DiscreteDistribution, Observable};
use crate::divergences::{
    check_renyi_order, hellinger, relative_entropy, renyi_divergence, RENYI_KL_WINDOW,
};
use crate::error::{check_len, Error, Result};
use crate::goal_oriented::{xi_bounds, Cgf, EmpiricalCgf, GoalBound};
use crate::linalg::{perron_root, solve, DenseMatrix};
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

pub const ROW_SUM_TOLERANCE: f64 = 1e-12;
/// Largest path space the enumeration oracle accepts.
pub const PATH_ENUMERATION_CAP: u128 = 2_000_000;

/// An irreducible row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    matrix: DenseMatrix,
}

impl TransitionMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        let matrix = DenseMatrix::from_rows(rows)?;
        for row in matrix.rows() {
            if row.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidDistribution(
                    "transition entries must be finite and nonnegative",
                ));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidDistribution("transition rows must sum to 1"));
            }
        }
        if !matrix.is_irreducible() {
            return Err(Error::Structure("transition matrix is reducible"));
        }
        Ok(Self { matrix })
    }

    /// Every row equal to `row`: an IID chain.
    pub fn iid(row: &DiscreteDistribution) -> Result<Self> {
        let w = row.weights().to_vec();
        Self::new(&vec![w; row.len()])
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn row(&self, x: usize) -> &[f64] {
        self.matrix.row(x)
    }

    pub fn period(&self) -> usize {
        self.matrix.period()
    }

    /// `p(x,y) > 0 ⇔ q(x,y) > 0` for every entry.
    pub fn mutually_continuous(&self, other: &Self) -> bool {
        self.size() == other.size()
            && self
                .matrix
                .rows()
                .zip(other.matrix.rows())
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (*x > 0.0) == (*y > 0.0)))
    }

    fn row_distribution(&self, x: usize) -> DiscreteDistribution {
        DiscreteDistribution::normalized(self.row(x).to_vec())
            .expect("rows are validated at construction")
    }
}

fn check_pair(q: &TransitionMatrix, p: &TransitionMatrix) -> Result<()> {
    check_len(p.size(), q.size())?;
    for x in 0..p.size() {
        for (y, (a, b)) in q.row(x).iter().zip(p.row(x)).enumerate() {
            if (*a > 0.0) != (*b > 0.0) {
                return Err(Error::Undefined {
                    index: x * p.size() + y,
                });
            }
        }
    }
    Ok(())
}

/// The unique `μ` with `μ p = μ`, by a direct solve of `(pᵀ − I) μ = 0`
/// with the last equation replaced by `Σ μ = 1`.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<DiscreteDistribution> {
    let n = p.size();
    let mut a = DenseMatrix::from_fn(n, |i, j| p.matrix[(j, i)] - if i == j { 1.0 } else { 0.0 });
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let mu = solve(&a, &b)?;
    // Round-off can leave tiny negatives on states of negligible mass.
    DiscreteDistribution::normalized(mu.into_iter().map(|v| v.max(0.0)).collect())
}

/// `r(q‖p) = Σ_x μq(x) R(q(x,·) ‖ p(x,·))`.
pub fn relative_entropy_rate(q: &TransitionMatrix, p: &TransitionMatrix) -> Result<f64> {
    check_pair(q, p)?;
    if q == p {
        return Ok(0.0);
    }
    let mu_q = stationary_distribution(q)?;
    let mut rate = 0.0;
    for (x, w) in mu_q.weights().iter().enumerate() {
        rate += w * relative_entropy(&q.row_distribution(x), &p.row_distribution(x))?;
    }
    Ok(rate.max(0.0))
}

/// `(α−1)⁻¹ log ρ(α)`, `ρ(α)` the Perron root of `q^α p^{1−α}`.
pub fn renyi_rate(q: &TransitionMatrix, p: &TransitionMatrix, alpha: f64) -> Result<f64> {
    check_renyi_order(alpha)?;
    check_pair(q, p)?;
    if q == p {
        return Ok(0.0);
    }
    if (alpha - 1.0).abs() < RENYI_KL_WINDOW {
        return relative_entropy_rate(q, p);
    }
    let n = p.size();
    let m = DenseMatrix::from_fn(n, |x, y| {
        let (a, b) = (q.matrix[(x, y)], p.matrix[(x, y)]);
        if a > 0.0 {
            (alpha * a.ln() + (1.0 - alpha) * b.ln()).exp()
        } else {
            0.0
        }
    });
    let rho = perron_root(&m)?.root;
    Ok((rho.ln() / (alpha - 1.0)).max(0.0))
}

/// `log ρ(2)`.
pub fn chi2_rate(q: &TransitionMatrix, p: &TransitionMatrix) -> Result<f64> {
    renyi_rate(q, p, 2.0)
}

/// Per-step Hellinger limit: `√2` when the chains differ, `0` otherwise.
pub fn hellinger_limit(q: &TransitionMatrix, p: &TransitionMatrix) -> Result<f64> {
    check_len(p.size(), q.size())?;
    Ok(if q == p {
        0.0
    } else {
        core::f64::consts::SQRT_2
    })
}

/// `c ↦ λ_{p,g}(c)`, the scaled cumulant generating function of
/// `Σ_k g(X_k)` under the stationary chain `p`.
#[derive(Debug, Clone)]
pub struct MarkovCgf {
    p: TransitionMatrix,
    mu: DiscreteDistribution,
    centered_g: Vec<f64>,
    constant: bool,
}

impl MarkovCgf {
    pub fn new(p: &TransitionMatrix, g: &Observable) -> Result<Self> {
        check_len(p.size(), g.len())?;
        let mu = stationary_distribution(p)?;
        let mean = mu.expectation(g)?;
        let centered_g: Vec<f64> = g.values().iter().map(|v| v - mean).collect();
        let first = g.values()[0];
        let constant = g.values().iter().all(|v| *v == first);
        Ok(Self {
            p: p.clone(),
            mu,
            centered_g,
            constant,
        })
    }

    pub fn stationary(&self) -> &DiscreteDistribution {
        &self.mu
    }

    /// `λ_{p,g}(c)`. Entries are scaled by `e^{−max_y c ḡ(y)}` before the
    /// eigen-solve and the shift is restored in log space.
    pub fn lambda(&self, c: f64) -> Result<f64> {
        if !c.is_finite() {
            return Err(Error::Domain {
                value: c,
                bound: f64::INFINITY,
            });
        }
        if c == 0.0 || self.constant {
            return Ok(0.0);
        }
        let exponents: Vec<f64> = self.centered_g.iter().map(|d| c * d).collect();
        let shift = exponents.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        let n = self.p.size();
        let m = DenseMatrix::from_fn(n, |x, y| {
            self.p.matrix[(x, y)] * (exponents[y] - shift).exp()
        });
        let rho = perron_root(&m)?.root;
        if !(rho > 0.0) {
            return Err(Error::Numeric("tilted matrix has zero Perron root"));
        }
        Ok((rho.ln() + shift).max(0.0))
    }

    /// `v = Var_μ(g) + 2 Σ_{k≥1} Cov_μ(g(X_0), g(X_k))` from the deflated
    /// system `(I − p + 1 μᵀ) h = ḡ`, as `v = 2⟨ḡ, h⟩_μ − ⟨ḡ, ḡ⟩_μ`.
    fn fundamental_variance(&self) -> Result<f64> {
        if self.constant {
            return Ok(0.0);
        }
        let n = self.p.size();
        let mu = self.mu.weights();
        let a = DenseMatrix::from_fn(n, |x, y| {
            let delta = if x == y { 1.0 } else { 0.0 };
            delta - self.p.matrix[(x, y)] + mu[y]
        });
        let h = solve(&a, &self.centered_g)?;
        let g = &self.centered_g;
        let gh: f64 = (0..n).map(|x| mu[x] * g[x] * h[x]).sum();
        let gg: f64 = (0..n).map(|x| mu[x] * g[x] * g[x]).sum();
        Ok((2.0 * gh - gg).max(0.0))
    }
}

impl Cgf for MarkovCgf {
    fn centered(&self, c: f64) -> Result<f64> {
        self.lambda(c)
    }

    fn variance(&self) -> Result<f64> {
        self.fundamental_variance()
    }
}

/// `λ_{p,g}(c)`.
pub fn lambda_pg(p: &TransitionMatrix, g: &Observable, c: f64) -> Result<f64> {
    MarkovCgf::new(p, g)?.lambda(c)
}

/// Integrated autocorrelation `v_{μp}(g)`; requires an aperiodic chain.
pub fn integrated_autocorrelation(p: &TransitionMatrix, g: &Observable) -> Result<f64> {
    if p.period() != 1 {
        return Err(Error::Structure(
            "integrated autocorrelation needs an aperiodic chain",
        ));
    }
    MarkovCgf::new(p, g)?.fundamental_variance()
}

/// Rate-level bound together with the curve it was optimized over.
#[derive(Debug, Clone)]
pub struct RateBound {
    /// `r(q‖p)` in nats per step.
    pub rer: f64,
    pub xi_plus_rate: f64,
    pub xi_minus_rate: f64,
    pub c_star_plus: f64,
    pub c_star_minus: f64,
    /// `v_{μp}(g)`.
    pub iact: f64,
    /// `√v · √(2r)`.
    pub linearized_half_width: f64,
    pub lambda_curve: MarkovCgf,
}

impl RateBound {
    pub fn contains(&self, gap: f64, tol: f64) -> bool {
        self.xi_minus_rate - tol <= gap && gap <= self.xi_plus_rate + tol
    }

    pub fn as_goal_bound(&self) -> GoalBound {
        GoalBound {
            xi_plus: self.xi_plus_rate,
            xi_minus: self.xi_minus_rate,
            c_star_plus: self.c_star_plus,
            c_star_minus: self.c_star_minus,
            linearized_half_width: self.linearized_half_width,
        }
    }
}

/// `ξ±(q‖p; g)`.
pub fn xi_rate_bounds(
    q: &TransitionMatrix,
    p: &TransitionMatrix,
    g: &Observable,
) -> Result<RateBound> {
    let rer = relative_entropy_rate(q, p)?;
    let curve = MarkovCgf::new(p, g)?;
    let bound = xi_bounds(&curve, rer)?;
    Ok(RateBound {
        rer,
        xi_plus_rate: bound.xi_plus,
        xi_minus_rate: bound.xi_minus,
        c_star_plus: bound.c_star_plus,
        c_star_minus: bound.c_star_minus,
        iact: curve.fundamental_variance()?,
        linearized_half_width: bound.linearized_half_width,
        lambda_curve: curve,
    })
}

/// `E_{μq} g − E_{μp} g`.
pub fn stationary_gap(q: &TransitionMatrix, p: &TransitionMatrix, g: &Observable) -> Result<f64> {
    Ok(stationary_distribution(q)?.expectation(g)? - stationary_distribution(p)?.expectation(g)?)
}

/// Bounds with `r` replaced by the cheaper upper surrogates
/// `sup_x R(q(x,·)‖p(x,·))` and `sup_{x,y} |log q/p|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheapRateBounds {
    pub sup_row_re: f64,
    pub sup_log_ratio: f64,
    pub with_sup_row_re: GoalBound,
    pub with_sup_log_ratio: GoalBound,
}

pub fn cheap_rate_bounds(
    q: &TransitionMatrix,
    p: &TransitionMatrix,
    g: &Observable,
) -> Result<CheapRateBounds> {
    check_pair(q, p)?;
    let mut sup_row_re = 0.0f64;
    let mut sup_log_ratio = 0.0f64;
    for x in 0..p.size() {
        sup_row_re = sup_row_re.max(relative_entropy(
            &q.row_distribution(x),
            &p.row_distribution(x),
        )?);
        for (a, b) in q.row(x).iter().zip(p.row(x)) {
            if *a > 0.0 {
                sup_log_ratio = sup_log_ratio.max((a.ln() - b.ln()).abs());
            }
        }
    }
    let curve = MarkovCgf::new(p, g)?;
    let with_sup_row_re = xi_bounds(&curve, sup_row_re)?;
    let with_sup_log_ratio = xi_bounds(&curve, sup_log_ratio)?;
    Ok(CheapRateBounds {
        sup_row_re,
        sup_log_ratio,
        with_sup_row_re,
        with_sup_log_ratio,
    })
}

/// Per-step quantities of the length-`n` path measures, from exhaustive
/// enumeration of `|S|^n` paths started from the stationary laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEnumeration {
    pub steps: usize,
    pub kl_per_step: f64,
    pub renyi_per_step: f64,
    pub hellinger: f64,
    /// `(E_{Q_n} − E_{P_n}) Σ g(X_k) / n`.
    pub gap_per_step: f64,
    /// `Ξ±(Q_n‖P_n; Σ g(X_k)) / n`.
    pub xi: GoalBound,
}

pub fn enumerate_paths(
    q: &TransitionMatrix,
    p: &TransitionMatrix,
    g: &Observable,
    steps: usize,
    alpha: f64,
) -> Result<PathEnumeration> {
    check_pair(q, p)?;
    check_len(p.size(), g.len())?;
    check_renyi_order(alpha)?;
    if steps == 0 {
        return Err(Error::Parameter {
            name: "steps",
            reason: "must be at least 1",
        });
    }
    let states = p.size() as u128;
    let total = states.checked_pow(steps as u32).unwrap_or(u128::MAX);
    if total > PATH_ENUMERATION_CAP {
        return Err(Error::TooLarge {
            states: total,
            cap: PATH_ENUMERATION_CAP,
        });
    }
    let mu_p = stationary_distribution(p)?;
    let mu_q = stationary_distribution(q)?;
    // Paths are extended one step at a time; only the last state is needed.
    let mut wp = mu_p.weights().to_vec();
    let mut wq = mu_q.weights().to_vec();
    let mut sum_g = g.values().to_vec();
    let mut last: Vec<usize> = (0..p.size()).collect();
    for _ in 1..steps {
        let len = wp.len() * p.size();
        let (mut np, mut nq, mut ng, mut nl) = (
            Vec::with_capacity(len),
            Vec::with_capacity(len),
            Vec::with_capacity(len),
            Vec::with_capacity(len),
        );
        for i in 0..wp.len() {
            for y in 0..p.size() {
                np.push(wp[i] * p.matrix[(last[i], y)]);
                nq.push(wq[i] * q.matrix[(last[i], y)]);
                ng.push(sum_g[i] + g.values()[y]);
                nl.push(y);
            }
        }
        wp = np;
        wq = nq;
        sum_g = ng;
        last = nl;
    }
    let pn = DiscreteDistribution::normalized(wp)?;
    let qn = DiscreteDistribution::normalized(wq)?;
    let gn = Observable::new(sum_g)?;
    let n = steps as f64;
    let kl = relative_entropy(&qn, &pn)?;
    let xi = xi_bounds(&EmpiricalCgf::new(&pn, &gn)?, kl)?;
    Ok(PathEnumeration {
        steps,
        kl_per_step: kl / n,
        renyi_per_step: renyi_divergence(&qn, &pn, alpha)? / n,
        hellinger: hellinger(&qn, &pn)?,
        gap_per_step: (qn.expectation(&gn)? - pn.expectation(&gn)?) / n,
        xi: xi.per_site(n),
    })
}
