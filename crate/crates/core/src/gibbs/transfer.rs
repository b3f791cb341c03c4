//! Free-boundary 1-D chains with single-site energy `u` and bond energy `w`,
//! summed by transfer matrices with per-step rescaling.

use alloc::vec;
use alloc::vec::Vec;

// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Chain {
    pub sites: usize,
    /// `u[s]`.
    pub site_energy: Vec<f64>,
    /// `w[s][s']`, bond `(σ_i, σ_{i+1})`.
    pub bond_energy: Vec<Vec<f64>>,
}

pub(crate) struct Moments {
    pub log_partition: f64,
    pub mean: f64,
    pub second: f64,
}

impl Chain {
    /// `log Z` and the first two moments of the additive functional
    /// `A = Σ_i a(σ_i) + Σ_i b(σ_i, σ_{i+1})`.
    pub fn moments(&self, a: &[f64], b: Option<&[Vec<f64>]>) -> Moments {
        let m = self.site_energy.len();
        let bond = |s: usize, t: usize| b.map_or(0.0, |b| b[s][t]);
        let first: Vec<f64> = self.site_energy.iter().map(|u| -u).collect();
        let shift = first.iter().fold(f64::NEG_INFINITY, |x, v| x.max(*v));
        let mut log_scale = shift;
        let mut z: Vec<f64> = first.iter().map(|e| (e - shift).exp()).collect();
        let mut z1: Vec<f64> = z.iter().zip(a).map(|(w, x)| w * x).collect();
        let mut z2: Vec<f64> = z.iter().zip(a).map(|(w, x)| w * x * x).collect();
        let exponent: Vec<Vec<f64>> = self
            .bond_energy
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.site_energy)
                    .map(|(w, u)| -w - u)
                    .collect()
            })
            .collect();
        let kmax = exponent
            .iter()
            .flatten()
            .fold(f64::NEG_INFINITY, |x, v| x.max(*v));
        let kernel: Vec<Vec<f64>> = exponent
            .iter()
            .map(|row| row.iter().map(|e| (e - kmax).exp()).collect())
            .collect();
        for _ in 1..self.sites {
            let mut n0 = vec![0.0; m];
            let mut n1 = vec![0.0; m];
            let mut n2 = vec![0.0; m];
            for t in 0..m {
                for s in 0..m {
                    let k = kernel[s][t];
                    if k == 0.0 {
                        continue;
                    }
                    let inc = a[t] + bond(s, t);
                    n0[t] += z[s] * k;
                    n1[t] += (z1[s] + z[s] * inc) * k;
                    n2[t] += (z2[s] + 2.0 * z1[s] * inc + z[s] * inc * inc) * k;
                }
            }
            let total: f64 = n0.iter().sum();
            log_scale += kmax + total.ln();
            z = n0.iter().map(|v| v / total).collect();
            z1 = n1.iter().map(|v| v / total).collect();
            z2 = n2.iter().map(|v| v / total).collect();
        }
        let total: f64 = z.iter().sum();
        Moments {
            log_partition: log_scale + total.ln(),
            mean: z1.iter().sum::<f64>() / total,
            second: z2.iter().sum::<f64>() / total,
        }
    }

    pub fn log_partition(&self) -> f64 {
        let zeros = vec![0.0; self.site_energy.len()];
        self.moments(&zeros, None).log_partition
    }

    /// `Var(Σ_i g(σ_i))`. The second pass centers each site term by the mean
    /// per site so the accumulated sum is already centered.
    pub fn variance_of_sum(&self, g: &[f64]) -> f64 {
        let mean = self.moments(g, None).mean;
        let shift = mean / self.sites as f64;
        let centered: Vec<f64> = g.iter().map(|v| v - shift).collect();
        self.moments(&centered, None).second.max(0.0)
    }
}
