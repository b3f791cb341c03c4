//! Study configuration, grid sweeps and the figure presets.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use infoscale_core::exact_models::{
    phase_bound, Ising1DParams, Ising2DParams, MeanFieldBranch, MeanFieldParams, ModelSpec,
    PhaseRow, SignBranch, SweepVariable,
};
use log::{info, warn};
use rayon::prelude::*;

use crate::output::{OutputFormat, Report, Table, PHASE_COLUMNS};
use crate::studies;

/// `from, from + step, …` up to `to` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !self.step.is_finite() || self.step <= 0.0 {
            bail!("sweep step must be positive, got {}", self.step);
        }
        if !self.from.is_finite() || !self.to.is_finite() || self.to < self.from {
            bail!("empty sweep range [{}, {}]", self.from, self.to);
        }
        // The slack keeps `to` when (to − from)/step is integral up to rounding.
        let count = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|i| self.from + i as f64 * self.step)
            .collect())
    }
}

pub const DEFAULT_BETA_GRID: (f64, f64, f64) = (0.1, 2.0, 0.01);
pub const DEFAULT_H_GRID: (f64, f64, f64) = (-1.5, 1.5, 0.01);

impl Grid {
    pub fn default_for(variable: SweepVariable) -> Self {
        let (from, to, step) = match variable {
            SweepVariable::Beta => DEFAULT_BETA_GRID,
            SweepVariable::H => DEFAULT_H_GRID,
        };
        Self {
            variable,
            from,
            to,
            step,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseStudy {
    pub target: ModelSpec,
    pub baseline: ModelSpec,
    pub grid: Grid,
}

/// Where a Gibbs observable comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum SiteObservable {
    /// `g(σ) = σ`.
    Spin,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Study {
    Divergence {
        p: PathBuf,
        q: PathBuf,
        observable: Option<PathBuf>,
        alpha: f64,
        n: Option<usize>,
    },
    GoalBound {
        p: PathBuf,
        q: PathBuf,
        observable: PathBuf,
        n: Option<usize>,
    },
    Markov {
        p: PathBuf,
        q: PathBuf,
        observable: PathBuf,
        cheap: bool,
        enumerate: Option<usize>,
        alpha: f64,
    },
    Gibbs {
        phi: PathBuf,
        psi: PathBuf,
        n: usize,
        side: Option<usize>,
        observable: SiteObservable,
    },
    Phase(PhaseStudy),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub study: Study,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Worker threads; `0` means one per core.
    pub jobs: usize,
    pub strict: bool,
}

impl SweepConfig {
    pub fn new(study: Study) -> Self {
        Self {
            study,
            output: None,
            format: OutputFormat::Csv,
            jobs: 0,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// Grid points that failed and were written as `nan` rows.
    pub failures: usize,
}

fn row_values(r: &PhaseRow) -> Vec<f64> {
    vec![
        r.param,
        r.baseline_qoi,
        r.true_qoi,
        r.xi_lower,
        r.xi_upper,
        r.lin_lower,
        r.lin_upper,
        r.re_rate,
    ]
}

/// Evaluates a phase study; rows come back in grid order whatever `jobs`.
pub fn run_phase(study: &PhaseStudy, jobs: usize) -> Result<Outcome> {
    let values = study.grid.values()?;
    let target = study.target;
    let baseline = study.baseline;
    let variable = study.grid.variable;
    let evaluate = |v: f64| -> infoscale_core::Result<PhaseRow> {
        phase_bound(&target.with(variable, v)?, &baseline.with(variable, v)?, v)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building the worker pool")?;
    info!(
        "phase sweep over {} points on {} threads",
        values.len(),
        pool.current_num_threads()
    );
    let results: Vec<_> = pool.install(|| values.par_iter().map(|&v| (v, evaluate(v))).collect());
    let mut failures = 0;
    let rows = results
        .into_iter()
        .map(|(v, r)| match r {
            Ok(row) => row_values(&row),
            Err(e) => {
                failures += 1;
                warn!("grid point {v}: {e}");
                let mut row = vec![f64::NAN; PHASE_COLUMNS.len()];
                row[0] = v;
                row
            }
        })
        .collect();
    Ok(Outcome {
        report: Report::Table(Table {
            columns: PHASE_COLUMNS.iter().map(|s| s.to_string()).collect(),
            rows,
        }),
        failures,
    })
}

pub fn run_sweep(config: &SweepConfig) -> Result<Outcome> {
    match &config.study {
        Study::Phase(study) => run_phase(study, config.jobs),
        other => Ok(Outcome {
            report: Report::Record(studies::run(other)?),
            failures: 0,
        }),
    }
}

pub const PRESETS: [&str; 8] = ["2a", "2b", "3a", "3b", "4a", "4b", "5a", "5b"];

fn mean_field(beta: f64, j: f64, h: f64, d: u32) -> ModelSpec {
    ModelSpec::MeanField(MeanFieldParams {
        beta,
        j,
        h,
        d,
        branch: MeanFieldBranch::Upper,
    })
}

fn ising1d(beta: f64, j: f64, h: f64) -> ModelSpec {
    ModelSpec::Ising1D(Ising1DParams { beta, j, h })
}

/// The model pairs and sweeps behind each phase-diagram figure. The swept
/// parameter's value in the models is a placeholder overwritten per point.
pub fn figure_preset(name: &str) -> Result<PhaseStudy> {
    use SweepVariable::{Beta, H};
    let (target, baseline, variable) = match name {
        "2a" => (
            mean_field(1.0, 2.0, 0.6, 1),
            mean_field(1.0, 2.0, 0.0, 1),
            Beta,
        ),
        "2b" => (
            mean_field(1.6, 1.0, 0.0, 1),
            mean_field(1.0, 1.0, 0.0, 1),
            H,
        ),
        "3a" => (ising1d(1.0, 1.0, 0.0), mean_field(1.0, 1.0, 0.0, 1), Beta),
        "3b" => (ising1d(1.0, 1.0, 0.0), mean_field(1.0, 1.0, 0.0, 1), H),
        "4a" | "4b" => {
            let target = ModelSpec::Ising2D(Ising2DParams {
                beta: 1.0,
                j: 1.0,
                branch: SignBranch::Plus,
            });
            let baseline = mean_field(1.0, 1.0, 0.0, 2);
            if name == "4a" {
                (target, baseline, Beta)
            } else {
                (target.flipped_branch(), baseline.flipped_branch(), Beta)
            }
        }
        "5a" => (ising1d(1.0, 1.0, 0.6), ising1d(1.0, 1.0, 0.0), Beta),
        "5b" => (ising1d(1.6, 1.0, 0.0), ising1d(1.0, 1.0, 0.0), H),
        other => {
            return Err(anyhow!(
                "unknown figure preset {other:?}; expected one of {}",
                PRESETS.join(", ")
            ))
        }
    };
    Ok(PhaseStudy {
        target,
        baseline,
        grid: Grid::default_for(variable),
    })
}
