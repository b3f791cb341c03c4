use crate::error::Result;
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

use super::check_beta;

/// Nearest-neighbour Ising chain `H = −βJ Σ σ_x σ_{x+1} − βh Σ σ_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ising1DParams {
    pub beta: f64,
    pub j: f64,
    pub h: f64,
}

/// Thermodynamic-limit quantities per site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ising1DQuantities {
    pub magnetization: f64,
    pub pressure: f64,
    /// `lim N⁻¹ E Σ_x σ_x σ_{x+1}`.
    pub nn_correlation: f64,
    /// `lim N⁻¹ Var Σ_x σ_x`.
    pub variance_per_site: f64,
}

/// Every quantity is evaluated after factoring `e^{βJ + β|h|}` out of
/// `e^{βJ} cosh βh` and `k₁ = √(e^{2βJ} sinh² βh + e^{−2βJ})`, so large
/// `β|h|` or `βJ` neither overflow nor cancel.
struct Scaled {
    /// `a + |x|`, the factored-out exponent.
    lead: f64,
    /// `e^{βJ} cosh βh / e^{lead}`.
    cosh_part: f64,
    /// `e^{βJ} sinh β|h| / e^{lead}`.
    sinh_part: f64,
    /// `u = −4βJ − 2β|h|`; `k₁ / e^{lead} = √(sinh_part² + e^u)`.
    u: f64,
}

impl Scaled {
    fn new(a: f64, x: f64) -> Self {
        let ax = x.abs();
        let e = (-2.0 * ax).exp();
        Self {
            lead: a + ax,
            cosh_part: 0.5 * (1.0 + e),
            sinh_part: -0.5 * (-2.0 * ax).exp_m1(),
            u: -4.0 * a - 2.0 * ax,
        }
    }

    /// `(k₁ / e^{lead}) · e^{−max(u,0)/2}` and `e^{−max(u,0)/2}`.
    fn k1_over_half(&self) -> (f64, f64) {
        if self.u <= 0.0 {
            ((self.sinh_part * self.sinh_part + self.u.exp()).sqrt(), 1.0)
        } else {
            let shrink = (-0.5 * self.u).exp();
            let w = (self.sinh_part * self.sinh_part * (-self.u).exp() + 1.0).sqrt();
            (w, shrink)
        }
    }

    fn log_k1_scaled(&self) -> f64 {
        let (w, _) = self.k1_over_half();
        w.ln() + 0.5 * self.u.max(0.0)
    }
}

/// `log[e^{a} cosh x + √(e^{2a} sinh² x + e^{−2a})]` with `a = βJ`, `x = βh`.
pub(crate) fn pressure_ax(a: f64, x: f64) -> f64 {
    let s = Scaled::new(a, x);
    let lc = s.cosh_part.ln();
    let lk = s.log_k1_scaled();
    let (hi, lo) = if lc > lk { (lc, lk) } else { (lk, lc) };
    s.lead + hi + (lo - hi).exp().ln_1p()
}

fn quantities_ax(a: f64, x: f64) -> Ising1DQuantities {
    let s = Scaled::new(a, x);
    let (w, shrink) = s.k1_over_half();
    // k₁/e^{lead} = w / shrink.
    let magnetization = x.signum() * s.sinh_part * shrink / w;
    let magnetization = if x == 0.0 { 0.0 } else { magnetization };
    // 2e^u / (D (cosh_part + D)), D = w / shrink.
    let ratio = if s.u <= 0.0 {
        2.0 * s.u.exp() / (w * (s.cosh_part + w))
    } else {
        2.0 / (w * (s.cosh_part * shrink + w))
    };
    // e^u cosh_part / D³.
    let variance = if s.u <= 0.0 {
        s.u.exp() * s.cosh_part / (w * w * w)
    } else {
        s.cosh_part * shrink / (w * w * w)
    };
    Ising1DQuantities {
        magnetization,
        pressure: pressure_ax(a, x),
        nn_correlation: 1.0 - ratio,
        variance_per_site: variance,
    }
}

pub fn ising1d_quantities(p: &Ising1DParams) -> Result<Ising1DQuantities> {
    check_beta(p.beta)?;
    super::check_finite("J", p.j)?;
    super::check_finite("h", p.h)?;
    Ok(quantities_ax(p.beta * p.j, p.beta * p.h))
}
