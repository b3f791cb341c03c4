//! File formats, parameter sweeps and report writers behind the `infoscale`
//! command-line tool.

pub mod formats;
pub mod output;
pub mod studies;
pub mod sweep;

pub use output::{format_float, read_table, OutputFormat, Record, Report, Table, PHASE_COLUMNS};
pub use sweep::{
    figure_preset, run_phase, run_sweep, Grid, Outcome, PhaseStudy, Study, SweepConfig,
};
