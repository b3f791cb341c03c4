//! Small numerically careful helpers used across the crate.

// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

/// `log Σ w_i exp(a_i)` with the largest exponent factored out.
///
/// Weights must be nonnegative; entries with zero weight are skipped.
pub fn log_sum_exp_weighted<I>(terms: I) -> f64
where
    I: IntoIterator<Item = (f64, f64)> + Clone,
{
    let max = terms
        .clone()
        .into_iter()
        .filter(|&(w, _)| w > 0.0)
        .map(|(_, a)| a)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms
        .into_iter()
        .filter(|&(w, _)| w > 0.0)
        .map(|(w, a)| w * (a - max).exp())
        .sum();
    max + sum.ln()
}

/// `log Σ exp(a_i)`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    log_sum_exp_weighted(values.iter().map(|&a| (1.0, a)))
}

/// `log cosh x`, exact in sign and safe for large `|x|`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - core::f64::consts::LN_2
}

/// `log(e^x + e^{-x})`.
pub fn ln_two_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Kahan-compensated sum, used where long enumerations are reduced.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_cosh_matches_direct_formula() {
        for &x in &[-3.0, -0.5, 0.0, 0.25, 2.0, 10.0] {
            let direct = Float::cosh(x).ln();
            assert!((ln_cosh(x) - direct).abs() < 1e-14, "x = {x}");
        }
        assert!((ln_cosh(1000.0) - (1000.0 - core::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(ln_cosh(-3.7).to_bits(), ln_cosh(3.7).to_bits());
    }

    #[test]
    fn log_sum_exp_handles_large_exponents() {
        let v = [1000.0, 1000.0];
        assert!((log_sum_exp(&v) - (1000.0 + core::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }
}
