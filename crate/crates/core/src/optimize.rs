//! One-dimensional minimization over `c > 0` for the variational bounds.
//!
//! Objectives of the form `(Λ(c) + R) / c` with convex `Λ`, `Λ(0) = 0` are
//! unimodal on `(0, ∞)`. The minimizer first brackets by doubling/halving
//! from `c = 1` and then runs golden-section search.

// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Smallest and largest `c` the bracketing phase will visit.
pub const C_MIN: f64 = 1e-200;
pub const C_MAX: f64 = 1e12;
/// Relative width at which golden-section search stops (absolute for `c ≤ 1`).
pub const C_TOLERANCE: f64 = 1e-10;
const MAX_GOLDEN_STEPS: usize = 400;
const MAX_BRACKET_STEPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
}

struct Tracked<F> {
    f: F,
    best: Minimum,
}

impl<F: FnMut(f64) -> f64> Tracked<F> {
    fn eval(&mut self, c: f64) -> f64 {
        let v = (self.f)(c);
        // Overflowed or undefined evaluations are treated as "too far".
        let v = if v.is_nan() || v == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            v
        };
        if v < self.best.value {
            self.best = Minimum {
                argmin: c,
                value: v,
            };
        }
        v
    }
}

/// Minimizes `objective` over `c ∈ (0, upper)`.
///
/// `upper` may be `f64::INFINITY`; the search never evaluates at or beyond
/// it. If the objective keeps decreasing up to [`C_MAX`], the value at the
/// largest visited point is returned; any `c` gives a valid bound, so this
/// only loses sharpness.
pub fn minimize_positive<F>(objective: F, upper: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> f64,
{
    if !(upper > 0.0) {
        return Err(Error::Parameter {
            name: "upper",
            reason: "search interval must be nonempty",
        });
    }
    let mut t = Tracked {
        f: objective,
        best: Minimum {
            argmin: f64::NAN,
            value: f64::INFINITY,
        },
    };
    let limit = upper.min(C_MAX);
    let step_right = |c: f64| {
        if upper.is_finite() {
            (2.0 * c).min(0.5 * (c + upper))
        } else {
            2.0 * c
        }
    };

    let mut b = if upper > 2.0 { 1.0 } else { 0.5 * upper };
    let mut fb = t.eval(b);
    let mut steps = 0;
    while !fb.is_finite() {
        b *= 0.5;
        steps += 1;
        if b < C_MIN || steps > MAX_BRACKET_STEPS {
            return Err(Error::UnboundedObservable);
        }
        fb = t.eval(b);
    }

    let mut a = 0.5 * b;
    let mut fa = t.eval(a);
    let mut c = step_right(b);
    let mut fc = if c < limit { t.eval(c) } else { f64::INFINITY };

    steps = 0;
    if fa < fb {
        // Walk left.
        while fa < fb {
            c = b;
            b = a;
            fb = fa;
            a *= 0.5;
            steps += 1;
            if a < C_MIN || steps > MAX_BRACKET_STEPS {
                return Ok(t.best);
            }
            fa = t.eval(a);
        }
    } else if fc < fb {
        // Walk right.
        while fc < fb {
            a = b;
            b = c;
            fb = fc;
            c = step_right(c);
            steps += 1;
            if c >= limit || steps > MAX_BRACKET_STEPS {
                return Ok(t.best);
            }
            fc = t.eval(c);
        }
    }

    golden_section(&mut t, a, c);
    Ok(t.best)
}

fn golden_section<F: FnMut(f64) -> f64>(t: &mut Tracked<F>, mut lo: f64, mut hi: f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = t.eval(x1);
    let mut f2 = t.eval(x2);
    for _ in 0..MAX_GOLDEN_STEPS {
        let scale = x1.max(1.0);
        if hi - lo <= C_TOLERANCE * scale {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = t.eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = t.eval(x2);
        }
    }
}
