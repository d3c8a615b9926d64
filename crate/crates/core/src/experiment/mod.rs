//! Seeded workloads, single runs, parameter sweeps and result aggregation.

mod config;
mod report;
mod run;
mod seed;
mod sweep;
mod workload;

pub use config::{ExperimentConfig, SweepGrid};
pub use report::{
    read_results_csv, render_svg_charts, render_tables, report, write_results_csv, ChannelCountRow,
    FailureRow, SeriesPoint, SuccessSeries, Summary, RESULTS_HEADER,
};
pub use run::{
    prepare, prepare_table, run, run_prepared, run_prepared_traced, topology_for, PreparedScenario,
    RunResult,
};
pub use seed::{derive_seed, Stream};
pub use sweep::{
    cell_means, sweep, sweep_with, CellKey, CellMean, RunFailure, ScenarioInput, SweepRow,
    SweepTable,
};
pub use workload::{generate_workload, workload_digest, WorkloadSpec};

use thiserror::Error;

use crate::graph::GraphError;
use crate::meshgen::MeshError;
use crate::payment::PaymentError;
use crate::scenario::ScenarioError;

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Payment(#[from] PaymentError),
    #[error("scenario rejected: mobility-aware mesh is not connected ({0})")]
    Rejected(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
