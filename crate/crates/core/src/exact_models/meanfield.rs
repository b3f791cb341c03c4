use crate::error::{Error, Result};
use crate::numeric::ln_two_cosh;
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

use super::check_beta;

/// Which non-trivial root of `m = tanh β(h + Jdm)` to take at `h = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanFieldBranch {
    Upper,
    Lower,
}

impl MeanFieldBranch {
    pub fn flipped(self) -> Self {
        match self {
            Self::Upper => Self::Lower,
            Self::Lower => Self::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldParams {
    pub beta: f64,
    pub j: f64,
    pub h: f64,
    pub d: u32,
    pub branch: MeanFieldBranch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldSolution {
    pub m: f64,
    /// `h + Jdm`.
    pub h_mf: f64,
    /// `log(2 cosh βh_mf)`.
    pub pressure: f64,
    /// `1 − m²`.
    pub variance_per_site: f64,
}

/// Bisection for a sign change of `φ` on `[lo, hi]` with `φ(lo) ≥ 0 > φ(hi)`.
fn bisect(phi: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if phi(hi).abs() < phi(lo).abs() {
        hi
    } else {
        lo
    }
}

/// The stable root of `m = tanh β(h + Jdm)`: the one with the sign of `h`,
/// or at `h = 0` the branch's sign once `βJd > 1`. The lower branch is the
/// exact mirror image of the upper one.
pub fn meanfield_solve(p: &MeanFieldParams) -> Result<MeanFieldSolution> {
    check_beta(p.beta)?;
    super::check_finite("J", p.j)?;
    super::check_finite("h", p.h)?;
    if p.d == 0 {
        return Err(Error::Parameter {
            name: "d",
            reason: "must be at least 1",
        });
    }
    let jd = p.j * p.d as f64;
    let flip = match p.branch {
        MeanFieldBranch::Upper => false,
        MeanFieldBranch::Lower => p.h == 0.0,
    };
    // Solve for |h| (mirror for h < 0) on the upper branch.
    let field = p.h.abs();
    let phi = |m: f64| (p.beta * (field + jd * m)).tanh() - m;
    let mut m = if field == 0.0 && p.beta * jd <= 1.0 {
        0.0
    } else {
        bisect(phi, 0.0, 1.0)
    };
    if p.h < 0.0 || flip {
        m = -m;
    }
    let h_mf = p.h + jd * m;
    Ok(MeanFieldSolution {
        m,
        h_mf,
        pressure: ln_two_cosh(p.beta * h_mf),
        variance_per_site: 1.0 - m * m,
    })
}
