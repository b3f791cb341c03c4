use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::ln_cosh;
use crate::quadrature::{integrate, DEFAULT_TOLERANCE};
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

use super::check_beta;

/// Relaxed tolerance used when the default one fails next to `β_c`.
pub const CRITICAL_TOLERANCE: f64 = 1e-8;

/// Sign of the spontaneous magnetization: the `h → 0⁺` or `h → 0⁻` state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignBranch {
    Plus,
    Minus,
}

impl SignBranch {
    pub fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }
}

/// Zero-field square-lattice Ising model, `J > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ising2DParams {
    pub beta: f64,
    pub j: f64,
    pub branch: SignBranch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ising2DQuantities {
    pub spontaneous_magnetization: f64,
    pub pressure: f64,
    /// `lim N⁻¹ E Σ_{⟨xy⟩} σ_x σ_y`, two bonds per site.
    pub nn_correlation: f64,
}

/// `β_c = log(1 + √2) / (2J)`.
pub fn critical_beta(j: f64) -> f64 {
    (1.0 + core::f64::consts::SQRT_2).ln() / (2.0 * j)
}

/// `κ(θ) = k(θ) / cosh²(2βJ)` written with `t = tanh 2βJ` and
/// `s = sech² 2βJ`, which stays finite for any `β`.
fn kappa(t: f64, s: f64, theta: f64) -> f64 {
    let v = t.powi(4) + s * s - 2.0 * t * t * s * (2.0 * theta).cos();
    v.max(0.0).sqrt()
}

fn integrate_relaxed(f: impl Fn(f64) -> f64) -> Result<f64> {
    integrate(&f, 0.0, PI, DEFAULT_TOLERANCE)
        .or_else(|_| integrate(&f, 0.0, PI, CRITICAL_TOLERANCE))
}

pub fn ising2d_quantities(p: &Ising2DParams) -> Result<Ising2DQuantities> {
    check_beta(p.beta)?;
    if !(p.j > 0.0) || !p.j.is_finite() {
        return Err(Error::Parameter {
            name: "J",
            reason: "the square-lattice formulas need a finite ferromagnetic coupling",
        });
    }
    let k = 2.0 * p.beta * p.j;
    let t = k.tanh();
    let sech = 1.0 / k.cosh();
    let s = sech * sech;
    let log_c2 = 2.0 * ln_cosh(k);
    // log[cosh² + k(θ)] = 2 log cosh + log(1 + κ).
    let integral = integrate_relaxed(|theta| log_c2 + kappa(t, s, theta).ln_1p())?;
    let pressure = 0.5 * core::f64::consts::LN_2 + integral / (2.0 * PI);
    // sinh(4βJ)/k = 2t/κ and (1 + cos 2θ)/(cosh² + k) = (1 + cos 2θ) s/(1 + κ).
    let corr_integrand = |theta: f64| {
        let mut th = theta;
        let mut kap = kappa(t, s, th);
        if kap < 1e-7 {
            // Only within ~1e-7 of β_c, near θ ∈ {0, π}, where the integrand
            // is a bounded 0/0. Step inside to avoid the cancellation.
            th += if th < 1.0 { 1e-7 } else { -1e-7 };
            kap = kappa(t, s, th);
        }
        2.0 * t / kap * (1.0 - (1.0 + (2.0 * th).cos()) * s / (1.0 + kap))
    };
    let nn_correlation = integrate_relaxed(corr_integrand)? / PI;
    let sinh = k.sinh();
    let m0 = if sinh > 1.0 {
        (1.0 - sinh.powi(-4)).powf(0.125)
    } else {
        0.0
    };
    Ok(Ising2DQuantities {
        spontaneous_magnetization: p.branch.sign() * m0,
        pressure,
        nn_correlation,
    })
}
