//! Finite-volume Gibbs measures of translation-invariant lattice
//! interactions, with free boundary conditions, and their goal-oriented
//! bounds for spatially averaged observables `f_N = N⁻¹ Σ_x g(σ_x)`.
//!
//! Small volumes are enumerated exhaustively; 1-D nearest-neighbour
//! interactions of any length use transfer matrices.

mod interaction;
mod transfer;

use alloc::vec;
use alloc::vec::Vec;

pub use interaction::{Cluster, Coupling, Interaction};
use transfer::Chain;

use crate::distribution::{DiscreteDistribution, Observable};
use crate::error::{check_len, Error, Result};
use crate::goal_oriented::{linearized_half_width, xi_bounds, Cgf, EmpiricalCgf, GoalBound};
use crate::numeric::log_sum_exp;
// Float math is not inherent on f64 in core; methods resolve through this trait.
#[allow(unused_imports)]
use num_traits::Float;

/// Largest configuration space enumerated exhaustively.
pub const ENUMERATION_CAP: u128 = 2_000_000;

/// The box `{0, …, side−1}^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeVolume {
    dimension: usize,
    side: usize,
    sites: usize,
}

impl LatticeVolume {
    pub fn new(dimension: usize, side: usize) -> Result<Self> {
        if dimension == 0 || side == 0 {
            return Err(Error::Parameter {
                name: "volume",
                reason: "dimension and side must be positive",
            });
        }
        let sites = side.checked_pow(dimension as u32).ok_or(Error::TooLarge {
            states: u128::MAX,
            cap: usize::MAX as u128,
        })?;
        Ok(Self {
            dimension,
            side,
            sites,
        })
    }

    /// `Λ_n = {−n, …, n}^d`, `N = (2n+1)^d`.
    pub fn centered(dimension: usize, n: usize) -> Result<Self> {
        Self::new(dimension, 2 * n + 1)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    fn coordinates(&self, mut site: usize) -> Vec<i64> {
        let mut c = vec![0; self.dimension];
        for slot in c.iter_mut().rev() {
            *slot = (site % self.side) as i64;
            site /= self.side;
        }
        c
    }

    fn site(&self, coordinates: &[i64]) -> Option<usize> {
        let mut index = 0;
        for &x in coordinates {
            if x < 0 || x >= self.side as i64 {
                return None;
            }
            index = index * self.side + x as usize;
        }
        Some(index)
    }
}

/// Every translate of every cluster that fits inside the volume.
#[derive(Debug, Clone)]
struct Placement {
    cluster: usize,
    sites: Vec<usize>,
}

fn placements(phi: &Interaction, volume: &LatticeVolume) -> Result<Vec<Placement>> {
    check_len(volume.dimension(), phi.dimension())?;
    let mut out = Vec::new();
    for base in 0..volume.sites() {
        let origin = volume.coordinates(base);
        for (k, cluster) in phi.clusters().iter().enumerate() {
            let sites: Option<Vec<usize>> = cluster
                .offsets()
                .iter()
                .map(|o| {
                    let c: Vec<i64> = origin.iter().zip(o).map(|(a, b)| a + b).collect();
                    volume.site(&c)
                })
                .collect();
            if let Some(sites) = sites {
                out.push(Placement { cluster: k, sites });
            }
        }
    }
    Ok(out)
}

fn energy(phi: &Interaction, placed: &[Placement], states: &[usize]) -> f64 {
    placed
        .iter()
        .map(|p| {
            phi.clusters()[p.cluster].evaluate(phi.spins(), p.sites.iter().map(|&s| states[s]))
        })
        .sum()
}

/// `H_N^Φ(σ) = Σ_{X⊂Λ} Φ_X(σ_X)` with free boundary conditions.
pub fn hamiltonian(phi: &Interaction, volume: &LatticeVolume, sigma: &[f64]) -> Result<f64> {
    check_len(volume.sites(), sigma.len())?;
    let states: Vec<usize> = sigma
        .iter()
        .map(|s| phi.state_of(*s))
        .collect::<Result<_>>()?;
    Ok(energy(phi, &placements(phi, volume)?, &states))
}

/// Calls `visit` on each configuration in lexicographic order, site 0 most
/// significant, spin states in the order of the spin space.
fn for_each_configuration(sites: usize, radix: usize, mut visit: impl FnMut(&[usize])) {
    let mut states = vec![0usize; sites];
    loop {
        visit(&states);
        let mut k = sites;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            states[k] += 1;
            if states[k] < radix {
                break;
            }
            states[k] = 0;
        }
    }
}

fn configuration_count(radix: usize, sites: usize) -> u128 {
    (radix as u128)
        .checked_pow(sites as u32)
        .unwrap_or(u128::MAX)
}

/// The 1-D nearest-neighbour chain of `phi`, if it has that form.
fn chain_of(phi: &Interaction, volume: &LatticeVolume) -> Option<Chain> {
    if phi.dimension() != 1 || phi.range() > 1 {
        return None;
    }
    let m = phi.spins().len();
    let mut site_energy = vec![0.0; m];
    let mut bond_energy = vec![vec![0.0; m]; m];
    for c in phi.clusters() {
        match c.len() {
            1 => {
                for (s, u) in site_energy.iter_mut().enumerate() {
                    *u += c.evaluate(phi.spins(), [s].into_iter());
                }
            }
            2 => {
                for (s, row) in bond_energy.iter_mut().enumerate() {
                    for (t, w) in row.iter_mut().enumerate() {
                        *w += c.evaluate(phi.spins(), [s, t].into_iter());
                    }
                }
            }
            _ => return None,
        }
    }
    Some(Chain {
        sites: volume.sites(),
        site_energy,
        bond_energy,
    })
}

#[derive(Debug, Clone)]
enum Representation {
    Enumerated { probabilities: DiscreteDistribution },
    Transfer(Chain),
}

/// `μ_N^Φ(σ) = exp(−H_N^Φ(σ)) / Z_N^Φ`.
#[derive(Debug, Clone)]
pub struct GibbsMeasure {
    interaction: Interaction,
    volume: LatticeVolume,
    log_partition: f64,
    representation: Representation,
}

impl GibbsMeasure {
    /// Transfer matrices when `phi` is 1-D nearest-neighbour, enumeration
    /// otherwise.
    pub fn new(phi: &Interaction, volume: LatticeVolume) -> Result<Self> {
        match chain_of(phi, &volume) {
            Some(chain) => Ok(Self::from_chain(phi, volume, chain)),
            None => Self::enumerated(phi, volume),
        }
    }

    pub fn transfer_matrix(phi: &Interaction, volume: LatticeVolume) -> Result<Self> {
        let chain = chain_of(phi, &volume).ok_or(Error::Unsupported(
            "transfer matrices need a 1-D nearest-neighbour interaction",
        ))?;
        Ok(Self::from_chain(phi, volume, chain))
    }

    fn from_chain(phi: &Interaction, volume: LatticeVolume, chain: Chain) -> Self {
        Self {
            interaction: phi.clone(),
            volume,
            log_partition: chain.log_partition(),
            representation: Representation::Transfer(chain),
        }
    }

    pub fn enumerated(phi: &Interaction, volume: LatticeVolume) -> Result<Self> {
        let radix = phi.spins().len();
        let count = configuration_count(radix, volume.sites());
        if count > ENUMERATION_CAP {
            return Err(Error::TooLarge {
                states: count,
                cap: ENUMERATION_CAP,
            });
        }
        let placed = placements(phi, &volume)?;
        let mut log_weights = Vec::with_capacity(count as usize);
        for_each_configuration(volume.sites(), radix, |states| {
            log_weights.push(-energy(phi, &placed, states));
        });
        let log_partition = log_sum_exp(&log_weights);
        let probabilities = DiscreteDistribution::normalized(
            log_weights
                .iter()
                .map(|w| (w - log_partition).exp())
                .collect(),
        )?;
        Ok(Self {
            interaction: phi.clone(),
            volume,
            log_partition,
            representation: Representation::Enumerated { probabilities },
        })
    }

    pub fn interaction(&self) -> &Interaction {
        &self.interaction
    }

    pub fn volume(&self) -> &LatticeVolume {
        &self.volume
    }

    pub fn sites(&self) -> usize {
        self.volume.sites()
    }

    /// `log Z_N^Φ`.
    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// The enumerated measure, in configuration order.
    pub fn distribution(&self) -> Option<&DiscreteDistribution> {
        match &self.representation {
            Representation::Enumerated { probabilities, .. } => Some(probabilities),
            Representation::Transfer(_) => None,
        }
    }

    fn check_site_observable(&self, g: &Observable) -> Result<()> {
        check_len(self.interaction.spins().len(), g.len())
    }

    /// `σ ↦ Σ_x g(σ_x)` on enumerated configurations.
    pub fn sum_observable(&self, g: &Observable) -> Result<Observable> {
        self.check_site_observable(g)?;
        if self.distribution().is_none() {
            return Err(Error::Unsupported(
                "configuration observables need an enumerated measure",
            ));
        }
        let mut values = Vec::new();
        for_each_configuration(self.sites(), self.interaction.spins().len(), |states| {
            values.push(states.iter().map(|&s| g.values()[s]).sum());
        });
        Observable::new(values)
    }

    /// `E_μ Σ_x g(σ_x)`.
    pub fn expectation_of_sum(&self, g: &Observable) -> Result<f64> {
        self.check_site_observable(g)?;
        match &self.representation {
            Representation::Enumerated { probabilities, .. } => {
                probabilities.expectation(&self.sum_observable(g)?)
            }
            Representation::Transfer(chain) => Ok(chain.moments(g.values(), None).mean),
        }
    }

    /// `Var_μ Σ_x g(σ_x)`.
    pub fn variance_of_sum(&self, g: &Observable) -> Result<f64> {
        self.check_site_observable(g)?;
        match &self.representation {
            Representation::Enumerated { probabilities, .. } => {
                probabilities.variance(&self.sum_observable(g)?)
            }
            Representation::Transfer(chain) => Ok(chain.variance_of_sum(g.values())),
        }
    }

    /// `E_μ H_N^Ψ` for another interaction `Ψ` on the same spins.
    pub fn expected_energy(&self, psi: &Interaction) -> Result<f64> {
        self.interaction.difference(psi)?;
        match &self.representation {
            Representation::Enumerated { probabilities, .. } => {
                let placed = placements(psi, &self.volume)?;
                let mut total = 0.0;
                let mut k = 0;
                let w = probabilities.weights();
                for_each_configuration(self.sites(), psi.spins().len(), |states| {
                    total += w[k] * energy(psi, &placed, states);
                    k += 1;
                });
                Ok(total)
            }
            Representation::Transfer(own) => {
                let other = chain_of(psi, &self.volume).ok_or(Error::Unsupported(
                    "energy of a longer-range interaction under a transfer-matrix measure",
                ))?;
                Ok(own
                    .moments(&other.site_energy, Some(&other.bond_energy))
                    .mean)
            }
        }
    }

    /// The measure of `Φ − cΓ^g`, i.e. `H_N − c Σ_x g(σ_x)`.
    pub fn tilted(&self, c: f64, g: &Observable) -> Result<Self> {
        self.check_site_observable(g)?;
        let values: Vec<f64> = g.values().iter().map(|v| -c * v).collect();
        let tilted = self.interaction.with_single_site(&values)?;
        match self.representation {
            Representation::Transfer(_) => Self::transfer_matrix(&tilted, self.volume),
            Representation::Enumerated { .. } => Self::enumerated(&tilted, self.volume),
        }
    }
}

fn check_same_volume(a: &GibbsMeasure, b: &GibbsMeasure) -> Result<()> {
    if a.volume != b.volume {
        return Err(Error::Parameter {
            name: "volume",
            reason: "measures live on different volumes",
        });
    }
    Ok(())
}

/// `R(μ^Ψ‖μ^Φ) = log Z^Φ − log Z^Ψ + E_{μ^Ψ}(H^Φ − H^Ψ)`.
pub fn gibbs_relative_entropy(psi: &GibbsMeasure, phi: &GibbsMeasure) -> Result<f64> {
    check_same_volume(psi, phi)?;
    let delta = phi.interaction.difference(&psi.interaction)?;
    if delta.triple_norm() == 0.0 {
        return Ok(0.0);
    }
    let r = phi.log_partition - psi.log_partition + psi.expected_energy(&delta)?;
    Ok(r.max(0.0))
}

/// `Λ̃(c) = log Z^{Φ−cΓ^g} − log Z^Φ − c E_{μ^Φ} Σ_x g(σ_x)`.
enum GibbsCgf {
    Enumerated(EmpiricalCgf),
    Transfer {
        chain: Chain,
        g: Vec<f64>,
        log_partition: f64,
        mean: f64,
        variance: f64,
    },
}

impl GibbsCgf {
    fn new(phi: &GibbsMeasure, g: &Observable) -> Result<Self> {
        phi.check_site_observable(g)?;
        Ok(match &phi.representation {
            Representation::Enumerated { probabilities, .. } => {
                Self::Enumerated(EmpiricalCgf::new(probabilities, &phi.sum_observable(g)?)?)
            }
            Representation::Transfer(chain) => Self::Transfer {
                chain: chain.clone(),
                g: g.values().to_vec(),
                log_partition: phi.log_partition,
                mean: chain.moments(g.values(), None).mean,
                variance: chain.variance_of_sum(g.values()),
            },
        })
    }
}

impl Cgf for GibbsCgf {
    fn centered(&self, c: f64) -> Result<f64> {
        match self {
            Self::Enumerated(e) => e.centered(c),
            Self::Transfer {
                chain,
                g,
                log_partition,
                mean,
                variance,
            } => {
                if c == 0.0 || *variance == 0.0 {
                    return Ok(0.0);
                }
                let mut tilted = chain.clone();
                for (u, v) in tilted.site_energy.iter_mut().zip(g) {
                    *u -= c * v;
                }
                Ok((tilted.log_partition() - log_partition - c * mean).max(0.0))
            }
        }
    }

    fn variance(&self) -> Result<f64> {
        match self {
            Self::Enumerated(e) => e.variance(),
            Self::Transfer { variance, .. } => Ok(*variance),
        }
    }
}

/// `E_{μ^Ψ} f_N − E_{μ^Φ} f_N`.
pub fn per_site_gap(psi: &GibbsMeasure, phi: &GibbsMeasure, g: &Observable) -> Result<f64> {
    check_same_volume(psi, phi)?;
    Ok((psi.expectation_of_sum(g)? - phi.expectation_of_sum(g)?) / phi.sites() as f64)
}

/// Per-site `Ξ±(μ^Ψ‖μ^Φ; Σ_x g(σ_x)) / N`.
pub fn finite_volume_xi(
    psi: &GibbsMeasure,
    phi: &GibbsMeasure,
    g: &Observable,
) -> Result<GoalBound> {
    let r = gibbs_relative_entropy(psi, phi)?;
    let cgf = GibbsCgf::new(phi, g)?;
    Ok(xi_bounds(&cgf, r)?.per_site(phi.sites() as f64))
}

/// Per-site bound with `R` replaced by `2N |||Φ − Ψ|||`.
pub fn triple_norm_xi(phi: &GibbsMeasure, psi: &Interaction, g: &Observable) -> Result<GoalBound> {
    let n = phi.sites() as f64;
    let surrogate = 2.0 * n * phi.interaction.difference(psi)?.triple_norm();
    let cgf = GibbsCgf::new(phi, g)?;
    Ok(xi_bounds(&cgf, surrogate)?.per_site(n))
}

/// What stands in for the relative entropy in the linearized bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropySurrogate {
    /// `R(μ^Ψ‖μ^Φ)` over the whole volume.
    RelativeEntropy(f64),
    /// `|||Φ − Ψ|||`, standing in for `R / (2N)`.
    TripleNorm(f64),
}

/// `√(N⁻¹ Var_{μ^Φ} Σ_x g(σ_x)) · √((2/N) R)`.
pub fn linearized_gibbs_bound(
    phi: &GibbsMeasure,
    surrogate: EntropySurrogate,
    g: &Observable,
) -> Result<f64> {
    let n = phi.sites() as f64;
    let per_site_entropy = match surrogate {
        EntropySurrogate::RelativeEntropy(r) => r / n,
        EntropySurrogate::TripleNorm(t) => 2.0 * t,
    };
    if !(per_site_entropy >= 0.0) {
        return Err(Error::Parameter {
            name: "surrogate",
            reason: "must be nonnegative",
        });
    }
    Ok(linearized_half_width(
        phi.variance_of_sum(g)? / n,
        per_site_entropy,
    ))
}
