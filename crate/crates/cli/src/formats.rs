//! JSON input formats.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use infoscale_core::exact_models::{
    Ising1DParams, Ising2DParams, MeanFieldBranch, MeanFieldParams, ModelSpec, SignBranch,
};
use infoscale_core::gibbs::{Coupling, Interaction};
use infoscale_core::markov::TransitionMatrix;
use infoscale_core::{DiscreteDistribution, Observable};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// `{"weights": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub weights: Vec<f64>,
}

/// `{"values": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableFile {
    pub values: Vec<f64>,
}

/// `{"rows": [[...], ...], "labels": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub rows: Vec<Vec<f64>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClusterKind {
    PairProduct {
        offsets: Vec<Vec<i64>>,
        coeff: f64,
    },
    Field {
        offsets: Vec<Vec<i64>>,
        coeff: f64,
    },
    Table {
        offsets: Vec<Vec<i64>>,
        values: Vec<f64>,
    },
}

/// `{"d": 1, "spins": [-1, 1], "clusters": [...]}`; couplings include `β`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionFile {
    pub d: usize,
    #[serde(default = "default_spins")]
    pub spins: Vec<f64>,
    pub clusters: Vec<ClusterKind>,
}

fn default_spins() -> Vec<f64> {
    vec![-1.0, 1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanFieldBranchName {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignBranchName {
    Plus,
    Minus,
}

/// Tagged by `"kind"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelFile {
    Ising1d {
        beta: f64,
        #[serde(rename = "J")]
        j: f64,
        #[serde(default)]
        h: f64,
    },
    Meanfield {
        beta: f64,
        #[serde(rename = "J")]
        j: f64,
        #[serde(default)]
        h: f64,
        #[serde(default = "default_d")]
        d: u32,
        #[serde(default = "default_mf_branch")]
        branch: MeanFieldBranchName,
    },
    Ising2d {
        beta: f64,
        #[serde(rename = "J")]
        j: f64,
        #[serde(default = "default_sign_branch")]
        branch: SignBranchName,
    },
}

fn default_d() -> u32 {
    1
}

fn default_mf_branch() -> MeanFieldBranchName {
    MeanFieldBranchName::Upper
}

fn default_sign_branch() -> SignBranchName {
    SignBranchName::Plus
}

impl From<ModelFile> for ModelSpec {
    fn from(m: ModelFile) -> Self {
        match m {
            ModelFile::Ising1d { beta, j, h } => ModelSpec::Ising1D(Ising1DParams { beta, j, h }),
            ModelFile::Meanfield {
                beta,
                j,
                h,
                d,
                branch,
            } => ModelSpec::MeanField(MeanFieldParams {
                beta,
                j,
                h,
                d,
                branch: match branch {
                    MeanFieldBranchName::Upper => MeanFieldBranch::Upper,
                    MeanFieldBranchName::Lower => MeanFieldBranch::Lower,
                },
            }),
            ModelFile::Ising2d { beta, j, branch } => ModelSpec::Ising2D(Ising2DParams {
                beta,
                j,
                branch: match branch {
                    SignBranchName::Plus => SignBranch::Plus,
                    SignBranchName::Minus => SignBranch::Minus,
                },
            }),
        }
    }
}

impl InteractionFile {
    pub fn to_interaction(&self) -> Result<Interaction> {
        let mut clusters = Vec::with_capacity(self.clusters.len());
        for (i, c) in self.clusters.iter().enumerate() {
            clusters.push(match c {
                ClusterKind::PairProduct { offsets, coeff } => {
                    if offsets.len() != 2 {
                        bail!("cluster {i}: pair_product needs exactly two offsets");
                    }
                    (offsets.clone(), Coupling::Product(*coeff))
                }
                ClusterKind::Field { offsets, coeff } => {
                    if offsets.len() != 1 {
                        bail!("cluster {i}: field needs exactly one offset");
                    }
                    (offsets.clone(), Coupling::Product(*coeff))
                }
                ClusterKind::Table { offsets, values } => {
                    (offsets.clone(), Coupling::Table(values.clone()))
                }
            });
        }
        Ok(Interaction::new(self.d, self.spins.clone(), clusters)?)
    }
}

/// Reads and parses a JSON file; errors name the file and the line/column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_distribution(path: &Path) -> Result<DiscreteDistribution> {
    let f: DistributionFile = read_json(path)?;
    DiscreteDistribution::new(f.weights).with_context(|| format!("in {}", path.display()))
}

pub fn load_observable(path: &Path) -> Result<Observable> {
    let f: ObservableFile = read_json(path)?;
    Observable::new(f.values).with_context(|| format!("in {}", path.display()))
}

pub fn load_chain(path: &Path) -> Result<TransitionMatrix> {
    let f: ChainFile = read_json(path)?;
    if let Some(labels) = &f.labels {
        if labels.len() != f.rows.len() {
            bail!(
                "in {}: {} labels for {} states",
                path.display(),
                labels.len(),
                f.rows.len()
            );
        }
    }
    TransitionMatrix::new(&f.rows).with_context(|| format!("in {}", path.display()))
}

pub fn load_interaction(path: &Path) -> Result<Interaction> {
    let f: InteractionFile = read_json(path)?;
    f.to_interaction()
        .with_context(|| format!("in {}", path.display()))
}

pub fn load_model(path: &Path) -> Result<ModelSpec> {
    let f: ModelFile = read_json(path)?;
    Ok(f.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interaction_example_parses() {
        let text = r#"{"d":1,"clusters":[{"offsets":[[0],[1]],"type":"pair_product","coeff":-0.5},{"offsets":[[0]],"type":"field","coeff":-0.3}]}"#;
        let f: InteractionFile = serde_json::from_str(text).unwrap();
        let phi = f.to_interaction().unwrap();
        let ising = Interaction::ising(1, 1.0, 0.5, 0.3).unwrap();
        assert_eq!(phi, ising);
    }

    #[test]
    fn model_examples_parse() {
        let a: ModelFile =
            serde_json::from_str(r#"{"kind":"ising1d","beta":1.0,"J":1.0,"h":0.0}"#).unwrap();
        assert!(matches!(ModelSpec::from(a), ModelSpec::Ising1D(_)));
        let b: ModelFile = serde_json::from_str(
            r#"{"kind":"meanfield","beta":1.0,"J":2.0,"h":0.0,"d":1,"branch":"upper"}"#,
        )
        .unwrap();
        assert!(matches!(ModelSpec::from(b), ModelSpec::MeanField(_)));
        let c: ModelFile =
            serde_json::from_str(r#"{"kind":"ising2d","beta":1.0,"J":1.0,"branch":"plus"}"#)
                .unwrap();
        assert!(matches!(ModelSpec::from(c), ModelSpec::Ising2D(_)));
        assert!(serde_json::from_str::<ModelFile>(r#"{"kind":"potts","beta":1.0}"#).is_err());
    }
}
