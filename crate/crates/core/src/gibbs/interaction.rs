use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

/// `Φ_X` as a function of the spins on `X`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// `coeff · Π_{x∈X} σ_x`.
    Product(f64),
    /// One value per configuration of `X`, states enumerated
    /// lexicographically in offset order.
    Table(Vec<f64>),
}

/// A translation class of clusters. Offsets are canonical: sorted, distinct,
/// and the first one is the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    offsets: Vec<Vec<i64>>,
    coupling: Coupling,
}

impl Cluster {
    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// `Φ_X(σ_X)` for spin-state indices in offset order.
    pub fn evaluate(&self, spins: &[f64], states: impl Iterator<Item = usize>) -> f64 {
        match &self.coupling {
            Coupling::Product(coeff) => states.fold(*coeff, |acc, s| acc * spins[s]),
            Coupling::Table(values) => {
                let index = states.fold(0, |acc, s| acc * spins.len() + s);
                values[index]
            }
        }
    }

    fn table(&self, spins: &[f64]) -> Vec<f64> {
        let k = self.offsets.len();
        let count = spins.len().pow(k as u32);
        (0..count)
            .map(|index| self.evaluate(spins, digits(index, spins.len(), k).into_iter()))
            .collect()
    }

    fn sup_norm(&self, spins: &[f64]) -> f64 {
        self.table(spins).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Base-`radix` digits of `index`, most significant first.
fn digits(mut index: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % radix;
        index /= radix;
    }
    out
}

/// A translation-invariant interaction on `Z^d` with a finite spin space.
///
/// The Hamiltonian of a volume is `Σ_{X⊂Λ} Φ_X(σ_X)`, with any inverse
/// temperature already folded into the couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    dimension: usize,
    spins: Vec<f64>,
    clusters: Vec<Cluster>,
}

impl Interaction {
    /// Clusters given as `(offsets, coupling)`. Each is shifted so its
    /// lexicographically smallest offset is the origin, and clusters of the
    /// same shape are merged into one.
    pub fn new(
        dimension: usize,
        spins: Vec<f64>,
        clusters: Vec<(Vec<Vec<i64>>, Coupling)>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Parameter {
                name: "dimension",
                reason: "must be at least 1",
            });
        }
        if spins.is_empty() || spins.iter().any(|s| !s.is_finite()) {
            return Err(Error::Parameter {
                name: "spins",
                reason: "need at least one finite spin value",
            });
        }
        for (i, a) in spins.iter().enumerate() {
            if spins[..i].contains(a) {
                return Err(Error::Parameter {
                    name: "spins",
                    reason: "spin values must be distinct",
                });
            }
        }
        let mut canonical = Vec::with_capacity(clusters.len());
        for (offsets, coupling) in clusters {
            canonical.push(canonicalize(dimension, &spins, offsets, coupling)?);
        }
        Ok(Self {
            dimension,
            clusters: merge(&spins, canonical),
            spins,
        })
    }

    /// Spins `±1` and no clusters.
    pub fn zero(dimension: usize) -> Result<Self> {
        Self::new(dimension, vec![-1.0, 1.0], Vec::new())
    }

    /// Nearest-neighbour Ising model `H = −βJ Σ_{⟨xy⟩} σ_x σ_y − βh Σ_x σ_x`.
    pub fn ising(dimension: usize, beta: f64, coupling: f64, field: f64) -> Result<Self> {
        let mut clusters = Vec::with_capacity(dimension + 1);
        for k in 0..dimension {
            let mut e = vec![0i64; dimension];
            e[k] = 1;
            clusters.push((
                vec![vec![0; dimension], e],
                Coupling::Product(-beta * coupling),
            ));
        }
        clusters.push((vec![vec![0; dimension]], Coupling::Product(-beta * field)));
        Self::new(dimension, vec![-1.0, 1.0], clusters)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spins(&self) -> &[f64] {
        &self.spins
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Largest coordinate extent of any cluster.
    pub fn range(&self) -> i64 {
        self.clusters
            .iter()
            .flat_map(|c| c.offsets.iter().flatten())
            .fold(0, |m, v| m.max(v.abs()))
    }

    /// `|||Φ||| = Σ_{X∋0} |X|⁻¹ ‖Φ_X‖∞`, i.e. the sum over translation
    /// classes of `sup_σ |Φ_X(σ)|`.
    pub fn triple_norm(&self) -> f64 {
        self.clusters.iter().map(|c| c.sup_norm(&self.spins)).sum()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::Dimension {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        if self.spins != other.spins {
            return Err(Error::Parameter {
                name: "spins",
                reason: "interactions use different spin spaces",
            });
        }
        Ok(())
    }

    /// `Φ − Ψ`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut clusters = self.clusters.clone();
        clusters.extend(other.clusters.iter().map(|c| Cluster {
            offsets: c.offsets.clone(),
            coupling: match &c.coupling {
                Coupling::Product(a) => Coupling::Product(-a),
                Coupling::Table(v) => Coupling::Table(v.iter().map(|x| -x).collect()),
            },
        }));
        Ok(Self {
            dimension: self.dimension,
            spins: self.spins.clone(),
            clusters: merge(&self.spins, clusters),
        })
    }

    /// Adds the single-site term `σ ↦ values[state(σ)]`.
    pub fn with_single_site(&self, values: &[f64]) -> Result<Self> {
        let mut clusters = self.clusters.clone();
        clusters.push(canonicalize(
            self.dimension,
            &self.spins,
            vec![vec![0; self.dimension]],
            Coupling::Table(values.to_vec()),
        )?);
        Ok(Self {
            dimension: self.dimension,
            spins: self.spins.clone(),
            clusters: merge(&self.spins, clusters),
        })
    }

    /// Index of a spin value in the spin space.
    pub fn state_of(&self, spin: f64) -> Result<usize> {
        self.spins
            .iter()
            .position(|s| *s == spin)
            .ok_or(Error::Parameter {
                name: "configuration",
                reason: "value is not in the spin space",
            })
    }
}

fn canonicalize(
    dimension: usize,
    spins: &[f64],
    offsets: Vec<Vec<i64>>,
    coupling: Coupling,
) -> Result<Cluster> {
    if offsets.is_empty() {
        return Err(Error::Parameter {
            name: "offsets",
            reason: "a cluster needs at least one site",
        });
    }
    for o in &offsets {
        if o.len() != dimension {
            return Err(Error::Dimension {
                expected: dimension,
                found: o.len(),
            });
        }
    }
    let k = offsets.len();
    match &coupling {
        Coupling::Product(a) if !a.is_finite() => {
            return Err(Error::Parameter {
                name: "coeff",
                reason: "must be finite",
            })
        }
        Coupling::Table(v) => {
            let expected = spins.len().checked_pow(k as u32).unwrap_or(usize::MAX);
            if v.len() != expected {
                return Err(Error::Dimension {
                    expected,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parameter {
                    name: "table",
                    reason: "values must be finite",
                });
            }
        }
        _ => {}
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| offsets[a].cmp(&offsets[b]));
    if order.windows(2).any(|w| offsets[w[0]] == offsets[w[1]]) {
        return Err(Error::Parameter {
            name: "offsets",
            reason: "cluster sites must be distinct",
        });
    }
    let origin = offsets[order[0]].clone();
    let sorted: Vec<Vec<i64>> = order
        .iter()
        .map(|&i| offsets[i].iter().zip(&origin).map(|(a, b)| a - b).collect())
        .collect();
    let coupling = match coupling {
        Coupling::Table(values) => {
            // Re-index so table digits follow the sorted offsets.
            let radix = spins.len();
            let table = (0..values.len())
                .map(|new_index| {
                    let new_digits = digits(new_index, radix, k);
                    let mut old_digits = vec![0; k];
                    for (pos, &old) in order.iter().enumerate() {
                        old_digits[old] = new_digits[pos];
                    }
                    values[old_digits.iter().fold(0, |acc, s| acc * radix + s)]
                })
                .collect();
            Coupling::Table(table)
        }
        product => product,
    };
    Ok(Cluster {
        offsets: sorted,
        coupling,
    })
}

fn merge(spins: &[f64], clusters: Vec<Cluster>) -> Vec<Cluster> {
    let mut merged: Vec<Cluster> = Vec::new();
    for c in clusters {
        match merged.iter_mut().find(|m| m.offsets == c.offsets) {
            None => merged.push(c),
            Some(m) => {
                m.coupling = match (&m.coupling, &c.coupling) {
                    (Coupling::Product(a), Coupling::Product(b)) => Coupling::Product(a + b),
                    _ => Coupling::Table(
                        m.table(spins)
                            .iter()
                            .zip(c.table(spins))
                            .map(|(a, b)| a + b)
                            .collect(),
                    ),
                };
            }
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ising_triple_norm() {
        for d in 1..=3 {
            let phi = Interaction::ising(d, 0.7, -1.3, 0.4).unwrap();
            assert!((phi.triple_norm() - 0.7 * (d as f64 * 1.3 + 0.4)).abs() < 1e-14);
        }
        assert_eq!(Interaction::zero(2).unwrap().triple_norm(), 0.0);
        let field = Interaction::ising(1, 2.0, 0.0, -0.25).unwrap();
        assert!((field.triple_norm() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn equivalent_clusters_merge() {
        let a = Interaction::new(
            1,
            vec![-1.0, 1.0],
            vec![
                (vec![vec![0], vec![1]], Coupling::Product(-0.5)),
                (vec![vec![-1], vec![0]], Coupling::Product(-0.25)),
            ],
        )
        .unwrap();
        assert_eq!(a.clusters().len(), 1);
        assert_eq!(a.clusters()[0].coupling(), &Coupling::Product(-0.75));
    }

    #[test]
    fn table_follows_offset_reordering() {
        // Φ(σ_1, σ_0) listed with offsets in reverse order.
        let table = vec![1.0, 2.0, 3.0, 4.0];
        let a = Interaction::new(
            1,
            vec![-1.0, 1.0],
            vec![(vec![vec![1], vec![0]], Coupling::Table(table))],
        )
        .unwrap();
        let c = &a.clusters()[0];
        assert_eq!(c.offsets(), &[vec![0], vec![1]]);
        // σ_0 = state 0, σ_1 = state 1 was index (σ_1, σ_0) = (1, 0) → 3.0.
        assert_eq!(c.evaluate(a.spins(), [0, 1].into_iter()), 3.0);
    }

    #[test]
    fn difference_of_equal_interactions_is_zero() {
        let phi = Interaction::ising(2, 0.4, 1.0, 0.3).unwrap();
        assert_eq!(phi.difference(&phi).unwrap().triple_norm(), 0.0);
        let psi = Interaction::ising(2, 0.4, 1.0, 0.5).unwrap();
        assert!((phi.difference(&psi).unwrap().triple_norm() - 0.08).abs() < 1e-15);
    }
}
