//! Thermodynamic-limit formulas for the 1-D Ising chain, the zero-field
//! square-lattice Ising model and the Curie-Weiss mean-field model, the
//! relative-entropy rates between them, and the per-site goal-oriented
//! bounds on magnetization built from those rates.

mod ising1d;
mod ising2d;
mod meanfield;

use alloc::vec::Vec;

pub use ising1d::{ising1d_quantities, Ising1DParams, Ising1DQuantities};
pub use ising2d::{
    critical_beta, ising2d_quantities, Ising2DParams, Ising2DQuantities, SignBranch,
};
pub use meanfield::{meanfield_solve, MeanFieldBranch, MeanFieldParams, MeanFieldSolution};

use crate::error::{Error, Result};
use crate::goal_oriented::linearized_half_width;
use crate::numeric::{ln_cosh, ln_two_cosh};
use crate::optimize::minimize_positive;
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Parameter {
            name: "beta",
            reason: "must be finite and positive",
        });
    }
    Ok(())
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Parameter {
            name,
            reason: "must be finite",
        });
    }
    Ok(())
}

/// One of the exactly solvable models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Ising1D(Ising1DParams),
    MeanField(MeanFieldParams),
    Ising2D(Ising2DParams),
}

/// The parameter a phase study sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Beta,
    H,
}

impl ModelSpec {
    pub fn beta(&self) -> f64 {
        match self {
            Self::Ising1D(p) => p.beta,
            Self::MeanField(p) => p.beta,
            Self::Ising2D(p) => p.beta,
        }
    }

    /// The same model with `β` or `h` replaced.
    pub fn with(&self, variable: SweepVariable, value: f64) -> Result<Self> {
        let mut out = *self;
        match (&mut out, variable) {
            (Self::Ising1D(p), SweepVariable::Beta) => p.beta = value,
            (Self::Ising1D(p), SweepVariable::H) => p.h = value,
            (Self::MeanField(p), SweepVariable::Beta) => p.beta = value,
            (Self::MeanField(p), SweepVariable::H) => p.h = value,
            (Self::Ising2D(p), SweepVariable::Beta) => p.beta = value,
            (Self::Ising2D(_), SweepVariable::H) => {
                return Err(Error::Unsupported("the square-lattice model has no field"))
            }
        }
        Ok(out)
    }

    /// The same model on the opposite symmetry-broken branch.
    pub fn flipped_branch(&self) -> Self {
        match *self {
            Self::MeanField(p) => Self::MeanField(MeanFieldParams {
                branch: p.branch.flipped(),
                ..p
            }),
            Self::Ising2D(p) => Self::Ising2D(Ising2DParams {
                branch: p.branch.flipped(),
                ..p
            }),
            other => other,
        }
    }

    /// Magnetization per site in the thermodynamic limit.
    pub fn magnetization(&self) -> Result<f64> {
        Ok(match self {
            Self::Ising1D(p) => ising1d_quantities(p)?.magnetization,
            Self::MeanField(p) => meanfield_solve(p)?.m,
            Self::Ising2D(p) => ising2d_quantities(p)?.spontaneous_magnetization,
        })
    }

    /// `lim N⁻¹ Var Σ_x σ_x`.
    pub fn variance_per_site(&self) -> Result<f64> {
        match self {
            Self::Ising1D(p) => Ok(ising1d_quantities(p)?.variance_per_site),
            Self::MeanField(p) => Ok(meanfield_solve(p)?.variance_per_site),
            Self::Ising2D(_) => Err(Error::Unsupported(
                "no closed-form square-lattice susceptibility",
            )),
        }
    }
}

/// `lim N⁻¹ R(μ^Q_N ‖ μ^P_N)` for the supported ordered pairs: mean field
/// against mean field, either Ising model against mean field, and 1-D Ising
/// against 1-D Ising.
pub fn cross_model_re_rate(q: &ModelSpec, p: &ModelSpec) -> Result<f64> {
    if q == p {
        return Ok(0.0);
    }
    let rate = match (q, p) {
        (ModelSpec::MeanField(qm), ModelSpec::MeanField(pm)) => {
            let (sq, sp) = (meanfield_solve(qm)?, meanfield_solve(pm)?);
            let (xq, xp) = (qm.beta * sq.h_mf, pm.beta * sp.h_mf);
            ln_two_cosh(xp) - ln_two_cosh(xq) + (xq - xp) * sq.m
        }
        (ModelSpec::Ising1D(qi), ModelSpec::MeanField(pm)) => {
            let s = ising1d_quantities(qi)?;
            let xp = pm.beta * meanfield_solve(pm)?.h_mf;
            ln_two_cosh(xp) - s.pressure
                + qi.beta * qi.j * s.nn_correlation
                + qi.beta * qi.h * s.magnetization
                - xp * s.magnetization
        }
        (ModelSpec::Ising2D(qi), ModelSpec::MeanField(pm)) => {
            let s = ising2d_quantities(qi)?;
            let xp = pm.beta * meanfield_solve(pm)?.h_mf;
            ln_two_cosh(xp) - s.pressure + qi.beta * qi.j * s.nn_correlation
                - xp * s.spontaneous_magnetization
        }
        (ModelSpec::Ising1D(qi), ModelSpec::Ising1D(pi)) => {
            let (sq, sp) = (ising1d_quantities(qi)?, ising1d_quantities(pi)?);
            sp.pressure - sq.pressure
                + (qi.beta * qi.j - pi.beta * pi.j) * sq.nn_correlation
                + (qi.beta * qi.h - pi.beta * pi.h) * sq.magnetization
        }
        _ => {
            return Err(Error::Unsupported(
                "no closed-form rate for this model pair",
            ))
        }
    };
    Ok(rate.max(0.0))
}

/// Per-site uncentered `lim N⁻¹ log E_P exp(c Σ_x σ_x)`.
pub fn model_cgf(p: &ModelSpec, c: f64) -> Result<f64> {
    check_finite("c", c)?;
    match p {
        ModelSpec::MeanField(m) => {
            let x = m.beta * meanfield_solve(m)?.h_mf;
            Ok(ln_cosh(c + x) - ln_cosh(x))
        }
        ModelSpec::Ising1D(i) => {
            check_beta(i.beta)?;
            let (a, x) = (i.beta * i.j, i.beta * i.h);
            Ok(ising1d::pressure_ax(a, x + c) - ising1d::pressure_ax(a, x))
        }
        ModelSpec::Ising2D(_) => Err(Error::Unsupported(
            "the square-lattice model is not a baseline",
        )),
    }
}

/// One grid point of a phase study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRow {
    pub param: f64,
    pub baseline_qoi: f64,
    pub true_qoi: f64,
    pub xi_lower: f64,
    pub xi_upper: f64,
    pub lin_lower: f64,
    pub lin_upper: f64,
    pub re_rate: f64,
}

impl PhaseRow {
    pub fn contains_truth(&self, tol: f64) -> bool {
        self.xi_lower - tol <= self.true_qoi && self.true_qoi <= self.xi_upper + tol
    }
}

/// Bounds on the target magnetization `E_{μ^Q} σ` from the baseline `P`:
///
/// ```text
/// upper = inf_{c>0} (Λ_P(c) + r) / c,   lower = sup_{c>0} (−Λ_P(−c) − r) / c
/// ```
///
/// with `Λ_P` the uncentered per-site CGF and `r` the per-site rate.
pub fn phase_bound(q: &ModelSpec, p: &ModelSpec, param: f64) -> Result<PhaseRow> {
    let r = cross_model_re_rate(q, p)?;
    let baseline = p.magnetization()?;
    let truth = q.magnetization()?;
    let variance = p.variance_per_site()?;
    let (upper, lower) = if r == 0.0 {
        (baseline, baseline)
    } else {
        let up = minimize_positive(|c| objective(p, c, r), f64::INFINITY)?;
        let down = minimize_positive(|c| objective(p, -c, r), f64::INFINITY)?;
        (up.value, -down.value)
    };
    let half = linearized_half_width(variance, r);
    Ok(PhaseRow {
        param,
        baseline_qoi: baseline,
        true_qoi: truth,
        xi_lower: lower,
        xi_upper: upper,
        lin_lower: baseline - half,
        lin_upper: baseline + half,
        re_rate: r,
    })
}

/// `(Λ(c) + r) / |c|`.
fn objective(p: &ModelSpec, c: f64, r: f64) -> f64 {
    match model_cgf(p, c) {
        Ok(l) => (l + r) / c.abs(),
        Err(_) => f64::INFINITY,
    }
}

/// `phase_bound` at each grid value, applied to both models.
pub fn phase_sweep(
    q: &ModelSpec,
    p: &ModelSpec,
    variable: SweepVariable,
    grid: &[f64],
) -> Vec<Result<PhaseRow>> {
    grid.iter()
        .map(|&v| phase_bound(&q.with(variable, v)?, &p.with(variable, v)?, v))
        .collect()
}
