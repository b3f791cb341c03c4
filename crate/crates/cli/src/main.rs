use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use infoscale::formats::load_model;
use infoscale::sweep::{
    figure_preset, run_sweep, Grid, PhaseStudy, SiteObservable, Study, SweepConfig,
};
use infoscale::OutputFormat;
use infoscale_core::exact_models::SweepVariable;

/// Information divergences and goal-oriented uncertainty bounds.
#[derive(Debug, Parser)]
#[command(name = "infoscale", version)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Worker threads for sweeps (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Exit nonzero if any grid point failed.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Divergences between two distributions and classical QoI bounds.
    Divergence {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        observable: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Also report the divergences of the n-fold products.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Goal-oriented bounds Ξ± for one observable.
    GoalBound {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        /// Per-site bound for the n-fold products.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Divergence rates and rate bounds between two Markov chains.
    Markov {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        observable: PathBuf,
        /// Also report the sup-based surrogate bounds.
        #[arg(long)]
        cheap: bool,
        /// Cross-check against exact enumeration of paths of this length.
        #[arg(long)]
        enumerate: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Finite-volume bounds between two lattice Gibbs measures.
    Gibbs {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        /// Volume {-n..n}^d.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Box side length; overrides --n.
        #[arg(long)]
        side: Option<usize>,
        /// `spin` or a path to an observable file over the spin states.
        #[arg(long, default_value = "spin")]
        observable: String,
    },
    /// Magnetization bounds for a target model from a baseline, over a sweep.
    Phase {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        baseline: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// A phase-diagram figure preset.
    Figure {
        #[arg(value_name = "NAME", required_unless_present = "figure")]
        name: Option<String>,
        #[arg(long = "figure", value_name = "NAME", conflicts_with = "name")]
        figure: Option<String>,
        #[command(flatten)]
        range: RangeArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variable {
    Beta,
    H,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    sweep: Variable,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
}

impl RangeArgs {
    fn apply(&self, mut grid: Grid) -> Grid {
        grid.from = self.from.unwrap_or(grid.from);
        grid.to = self.to.unwrap_or(grid.to);
        grid.step = self.step.unwrap_or(grid.step);
        grid
    }
}

fn study(command: Command) -> Result<Study> {
    Ok(match command {
        Command::Divergence {
            p,
            q,
            observable,
            alpha,
            n,
        } => Study::Divergence {
            p,
            q,
            observable,
            alpha,
            n,
        },
        Command::GoalBound {
            p,
            q,
            observable,
            n,
        } => Study::GoalBound {
            p,
            q,
            observable,
            n,
        },
        Command::Markov {
            p,
            q,
            observable,
            cheap,
            enumerate,
            alpha,
        } => Study::Markov {
            p,
            q,
            observable,
            cheap,
            enumerate,
            alpha,
        },
        Command::Gibbs {
            phi,
            psi,
            n,
            side,
            observable,
        } => Study::Gibbs {
            phi,
            psi,
            n,
            side,
            observable: match observable.as_str() {
                "spin" => SiteObservable::Spin,
                path => SiteObservable::File(path.into()),
            },
        },
        Command::Phase {
            target,
            baseline,
            sweep,
        } => {
            let variable = match sweep.sweep {
                Variable::Beta => SweepVariable::Beta,
                Variable::H => SweepVariable::H,
            };
            Study::Phase(PhaseStudy {
                target: load_model(&target)?,
                baseline: load_model(&baseline)?,
                grid: sweep.range.apply(Grid::default_for(variable)),
            })
        }
        Command::Figure {
            name,
            figure,
            range,
        } => {
            let Some(name) = name.or(figure) else {
                bail!("a figure preset name is required");
            };
            let mut preset = figure_preset(&name)?;
            preset.grid = range.apply(preset.grid);
            Study::Phase(preset)
        }
    })
}

fn run(cli: Cli) -> Result<bool> {
    let config = SweepConfig {
        study: study(cli.command)?,
        output: cli.out,
        format: cli.format,
        jobs: cli.jobs,
        strict: cli.strict,
    };
    let outcome = run_sweep(&config)?;
    match &config.output {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            outcome.report.write(config.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            outcome.report.write(config.format, &mut w)?;
            w.flush()?;
        }
    }
    if outcome.failures > 0 {
        log::warn!(
            "{} grid point(s) failed and were written as nan",
            outcome.failures
        );
    }
    Ok(!(config.strict && outcome.failures > 0))
}

/// A closed downstream pipe (`| head`) is not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let io = c.downcast_ref::<io::Error>().or_else(|| {
            match c.downcast_ref::<csv::Error>()?.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            }
        });
        io.is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("INFOSCALE_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
