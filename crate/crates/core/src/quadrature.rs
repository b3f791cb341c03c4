//! Adaptive Simpson quadrature with an explicit work stack.

use alloc::vec::Vec;

use crate::error::{Error, Result};
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Largest number of subintervals accepted before giving up.
pub const INTERVAL_CAP: usize = 1_000_000;
const MAX_DEPTH: u32 = 60;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tolerance: f64,
    depth: u32,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// `∫_a^b f` to absolute tolerance `tolerance`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Parameter {
            name: "quadrature",
            reason: "needs finite limits and a positive tolerance",
        });
    }
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut stack = Vec::with_capacity(64);
    stack.push(Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tolerance,
        depth: 0,
    });
    let mut total = 0.0;
    let mut compensation = 0.0;
    let mut intervals = 1usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let refined = left + right;
        let error = refined - p.whole;
        if !refined.is_finite() {
            return Err(Error::Numeric("non-finite integrand"));
        }
        // Panels at the depth limit are accepted as is; their width is
        // below 2⁻⁶⁰ of the range, which only happens at integrable
        // singularities.
        if error.abs() <= 15.0 * p.tolerance || p.depth >= MAX_DEPTH {
            // Kahan summation of accepted panels.
            let y = refined + error / 15.0 - compensation;
            let t = total + y;
            compensation = (t - total) - y;
            total = t;
            continue;
        }
        intervals += 1;
        if intervals > INTERVAL_CAP {
            return Err(Error::Numeric("quadrature exceeded its interval cap"));
        }
        let tolerance = 0.5 * p.tolerance;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tolerance,
            depth: p.depth + 1,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tolerance,
            depth: p.depth + 1,
        });
    }
    Ok(total)
}
