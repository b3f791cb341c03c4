//! Dense square matrices: direct solves and the Perron root of nonnegative
//! matrices. Sizes here are tiny (chain state spaces, transfer matrices), so
//! everything is row-major `Vec<f64>` with no blocking.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relative change of the Rayleigh quotient at which power iteration stops.
pub const PERRON_TOLERANCE: f64 = 1e-13;
pub const PERRON_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![0.0; size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::Dimension {
                    expected: size,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { size, data })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        Self { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.size.max(1))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self[(j, i)])
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ M`.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.size];
        for (xi, row) in x.iter().zip(self.rows()) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += xi * a;
            }
        }
        out
    }

    /// Whether the directed graph of positive entries is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        if self.size == 0 {
            return false;
        }
        let forward = self.reachable_from(0, false);
        let backward = self.reachable_from(0, true);
        forward.iter().all(|&r| r) && backward.iter().all(|&r| r)
    }

    fn reachable_from(&self, start: usize, reversed: bool) -> Vec<bool> {
        let mut seen = vec![false; self.size];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in 0..self.size {
                let w = if reversed { self[(v, u)] } else { self[(u, v)] };
                if w > 0.0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Period of an irreducible nonnegative matrix (1 means aperiodic).
    pub fn period(&self) -> usize {
        let mut level = vec![usize::MAX; self.size];
        let mut queue = VecDeque::new();
        level[0] = 0;
        queue.push_back(0);
        let mut g = 0usize;
        while let Some(u) = queue.pop_front() {
            for v in 0..self.size {
                if self[(u, v)] <= 0.0 {
                    continue;
                }
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    let diff = (level[u] + 1).abs_diff(level[v]);
                    g = gcd(g, diff);
                }
            }
        }
        g.max(1)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl core::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.size + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.size + j]
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.size();
    if b.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: b.len(),
        });
    }
    let mut m = a.data.clone();
    let mut x = b.to_vec();
    let scale = m
        .iter()
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))
            .unwrap_or(col);
        if m[pivot * n + col].abs() <= 1e-14 * scale {
            return Err(Error::Numeric("singular linear system"));
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            x.swap(col, pivot);
        }
        let d = m[col * n + col];
        for i in col + 1..n {
            let factor = m[i * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[i * n + k] -= factor * m[col * n + k];
            }
            x[i] -= factor * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for k in col + 1..n {
            acc -= m[col * n + k] * x[k];
        }
        x[col] = acc / m[col * n + col];
    }
    Ok(x)
}

/// Perron root and a positive right eigenvector (unit ℓ¹ norm).
#[derive(Debug, Clone, PartialEq)]
pub struct PerronPair {
    pub root: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// Power iteration from the uniform vector with a Rayleigh-quotient stopping
/// test. If the plain iteration stalls (imprimitive matrices), it restarts on
/// `M + sI` with `s` the current estimate, which is primitive.
pub fn perron_root(m: &DenseMatrix) -> Result<PerronPair> {
    let n = m.size();
    if n == 0 {
        return Err(Error::Dimension {
            expected: 1,
            found: 0,
        });
    }
    if m.data.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::Parameter {
            name: "matrix",
            reason: "entries must be finite and nonnegative",
        });
    }
    let start = vec![1.0 / n as f64; n];
    let half = PERRON_MAX_ITERATIONS / 2;
    match power_iterate(m, 0.0, start.clone(), half) {
        Ok(pair) => Ok(pair),
        Err(estimate) => {
            let shift = estimate.max(f64::MIN_POSITIVE);
            power_iterate(m, shift, start, half)
                .map_err(|_| Error::Numeric("power iteration did not converge"))
        }
    }
}

fn power_iterate(
    m: &DenseMatrix,
    shift: f64,
    mut x: Vec<f64>,
    max_iterations: usize,
) -> core::result::Result<PerronPair, f64> {
    let apply = |x: &[f64]| {
        let mut y = m.mul_vec(x);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += shift * xi;
        }
        y
    };
    let mut previous = f64::NAN;
    let mut settled = 0;
    for it in 1..=max_iterations {
        let y = apply(&x);
        let xx: f64 = x.iter().map(|v| v * v).sum();
        let rayleigh = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / xx;
        let mass: f64 = y.iter().sum();
        if mass <= 0.0 {
            // Nilpotent on the start vector's orbit.
            return Ok(PerronPair {
                root: 0.0,
                vector: x,
                iterations: it,
            });
        }
        let next: Vec<f64> = y.iter().map(|v| v / mass).collect();
        let change = next
            .iter()
            .zip(&x)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        let converged_value = (rayleigh - previous).abs() <= PERRON_TOLERANCE * rayleigh.abs();
        x = next;
        previous = rayleigh;
        if converged_value {
            // Keep iterating until the vector itself stops moving, so the
            // root is accurate well beyond the stopping tolerance.
            settled += 1;
            if change <= 4.0 * f64::EPSILON || settled > 200 {
                let y = apply(&x);
                let root = y.iter().sum::<f64>() - shift;
                return Ok(PerronPair {
                    root: root.max(0.0),
                    vector: x,
                    iterations: it,
                });
            }
        } else {
            settled = 0;
        }
    }
    Err(previous - shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    // Float math is not inherent on f64 in core; methods resolve through this trait.
    #[allow(unused_imports)]
    use num_traits::Float;

    #[test]
    fn solve_small_system() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
        let s = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(solve(&s, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn perron_root_matches_characteristic_polynomial() {
        let cases = [
            [[0.9, 0.1], [0.4, 0.6]],
            [[0.2, 1.7], [0.3, 0.05]],
            [[1e-3, 2.0], [5.0, 1e-3]],
        ];
        for c in cases {
            let m = DenseMatrix::from_rows(&[c[0].to_vec(), c[1].to_vec()]).unwrap();
            let tr = c[0][0] + c[1][1];
            let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
            let root = 0.5 * (tr + (tr * tr - 4.0 * det).sqrt());
            let pair = perron_root(&m).unwrap();
            assert!((pair.root - root).abs() < 1e-10 * root, "{c:?}");
        }
    }

    #[test]
    fn periodic_matrix_falls_back_to_shift() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![0.5, 0.0]]).unwrap();
        let pair = perron_root(&m).unwrap();
        assert!((pair.root - 1.0).abs() < 1e-12);
        assert_eq!(m.period(), 2);
    }

    #[test]
    fn irreducibility_and_period() {
        let cyc = DenseMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(cyc.is_irreducible());
        assert_eq!(cyc.period(), 3);
        let red = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert!(!red.is_irreducible());
        let lazy = DenseMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(lazy.period(), 1);
    }
}
