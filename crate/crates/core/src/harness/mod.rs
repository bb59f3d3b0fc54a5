//! Experiment drivers, reports and the command-line interface.

pub mod cli;
mod config;
mod eval_grid;
mod experiments;
mod report;

pub use config::{Config, ExperimentConfig, GeemSection, ModelsConfig, OdfConfig, SchemeConfig};
pub use eval_grid::{mean_error, model_mean_error, EvaluationGrid};
pub use experiments::{
    log_log_slope, run_angular, run_bench, run_reconstruction, run_rotation, BenchReport, BenchRow, Pipelines,
    SchemeKind,
};
pub use report::{AngularRow, ExperimentReport, PeakRow, ReconRow, ReportMetadata, RotationRow, SchemeSummary};
