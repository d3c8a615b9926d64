use std::io::Write;

use serde::{Deserialize, Serialize};

use super::seed::{derive_seed, Stream};
use super::workload::{generate_workload, WorkloadSpec};
use super::{ExperimentConfig, ExperimentError};
use crate::assign::{assign, topology_report, LnTopology, Strategy, TopologyReport};
use crate::graph::component_labels;
use crate::meshgen::{
    mobility_aware_mesh, screen_connectivity, snapshots, MeshSnapshot, MobilityAwareMesh,
    ScreenReport,
};
use crate::par::Execution;
use crate::payment::{fund, PaymentOutcome, PaymentRequest, Sat, TraceLog};
use crate::scenario::{distances_with, resample_with, DistanceTable, Scenario};

/// Mesh-side state shared by every run on one scenario.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub id: String,
    pub snapshots: Vec<MeshSnapshot>,
    /// Mesh component labels per epoch.
    pub labels: Vec<Vec<usize>>,
    pub mesh: MobilityAwareMesh,
    pub screen: ScreenReport,
}

impl PreparedScenario {
    pub fn nodes(&self) -> usize {
        self.mesh.nodes()
    }

    pub fn epochs(&self) -> usize {
        self.snapshots.len()
    }
}

/// Resample, compute distances, snapshots and the mobility-aware mesh.
pub fn prepare(
    id: impl Into<String>,
    scenario: &Scenario,
    coverage_d: f64,
    threshold_k: usize,
    interval: f64,
    mode: Execution,
) -> Result<PreparedScenario, ExperimentError> {
    let frames = resample_with(scenario, interval, mode)?;
    let table = distances_with(&frames, mode)?;
    prepare_table(id, &table, coverage_d, threshold_k, mode)
}

/// [`prepare`] from an already computed distance table.
pub fn prepare_table(
    id: impl Into<String>,
    table: &DistanceTable,
    coverage_d: f64,
    threshold_k: usize,
    mode: Execution,
) -> Result<PreparedScenario, ExperimentError> {
    let mesh = mobility_aware_mesh(table, coverage_d, threshold_k)?;
    let snaps = snapshots(table, coverage_d, mode)?;
    let labels = snaps.iter().map(|s| component_labels(&s.graph)).collect();
    let screen = screen_connectivity(&mesh);
    Ok(PreparedScenario {
        id: id.into(),
        snapshots: snaps,
        labels,
        mesh,
        screen,
    })
}

/// Aggregated metrics of one run; field order matches the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub scenario: String,
    pub strategy: Strategy,
    pub nodes: usize,
    pub n_per_epoch: usize,
    pub investment: Sat,
    pub seed: u64,
    pub channels: usize,
    pub total: usize,
    pub success: usize,
    pub fail_capacity: usize,
    pub fail_mesh: usize,
    pub success_rate: f64,
    pub degree_variance: f64,
    pub mean_closeness: f64,
}

impl RunResult {
    pub fn partition_holds(&self) -> bool {
        self.success + self.fail_capacity + self.fail_mesh == self.total
    }
}

/// Runs the payment workload of `config` against a funded `topology`.
pub fn run_prepared(
    config: &ExperimentConfig,
    prepared: &PreparedScenario,
    topology: &LnTopology,
    summary: &TopologyReport,
) -> Result<RunResult, ExperimentError> {
    simulate::<std::io::Sink>(config, prepared, topology, summary, None)
}

/// [`run_prepared`] that also logs every payment.
pub fn run_prepared_traced<W: Write>(
    config: &ExperimentConfig,
    prepared: &PreparedScenario,
    topology: &LnTopology,
    summary: &TopologyReport,
    trace: &mut TraceLog<W>,
) -> Result<RunResult, ExperimentError> {
    simulate(config, prepared, topology, summary, Some(trace))
}

fn simulate<W: Write>(
    config: &ExperimentConfig,
    prepared: &PreparedScenario,
    topology: &LnTopology,
    summary: &TopologyReport,
    mut trace: Option<&mut TraceLog<W>>,
) -> Result<RunResult, ExperimentError> {
    config.validate()?;
    let mut net = fund(topology, config.total_investment)?;
    let spec = WorkloadSpec {
        nodes: prepared.nodes(),
        per_epoch: config.payments_per_epoch,
        amounts: config.amounts.clone(),
        seed: derive_seed(
            config.seed,
            Stream::Workload,
            &[config.payments_per_epoch as u64],
        ),
    };
    let requests = generate_workload(&spec, prepared.epochs())?;
    let (mut success, mut fail_capacity, mut fail_mesh) = (0, 0, 0);
    for chunk in requests.chunk_by(|a: &PaymentRequest, b| a.epoch == b.epoch) {
        let labels = &prepared.labels[chunk[0].epoch];
        for req in chunk {
            let outcome = net.execute_with_labels(labels, req, config.hop_policy)?;
            match outcome {
                PaymentOutcome::Success(_) => success += 1,
                PaymentOutcome::FailNoCapacity => fail_capacity += 1,
                PaymentOutcome::FailNoMeshPath => fail_mesh += 1,
            }
            if let Some(log) = trace.as_deref_mut() {
                log.record(req, &outcome)
                    .map_err(|e| ExperimentError::Config(format!("trace log: {e}")))?;
            }
        }
    }
    let total = requests.len();
    Ok(RunResult {
        scenario: prepared.id.clone(),
        strategy: config.strategy,
        nodes: prepared.nodes(),
        n_per_epoch: config.payments_per_epoch,
        investment: config.total_investment,
        seed: config.seed,
        channels: topology.channel_count(),
        total,
        success,
        fail_capacity,
        fail_mesh,
        success_rate: if total == 0 {
            0.0
        } else {
            success as f64 / total as f64
        },
        degree_variance: summary.degree_variance,
        mean_closeness: summary.mean_closeness,
    })
}

/// Builds the channel topology for a prepared scenario, rejecting scenarios
/// that fail the connectivity screen.
pub fn topology_for(
    prepared: &PreparedScenario,
    strategy: Strategy,
    seed: u64,
) -> Result<(LnTopology, TopologyReport), ExperimentError> {
    if !prepared.screen.passed() {
        return Err(ExperimentError::Rejected(prepared.screen.describe()));
    }
    let topo = assign(
        &prepared.mesh,
        strategy,
        derive_seed(seed, Stream::Ust, &[]),
    )?;
    let summary = topology_report(&topo)?;
    Ok((topo, summary))
}

/// Full pipeline for one scenario: resample, distances, mesh, assignment,
/// funding and every epoch of payments.
pub fn run(
    config: &ExperimentConfig,
    id: &str,
    scenario: &Scenario,
) -> Result<RunResult, ExperimentError> {
    config.validate()?;
    let prepared = prepare(
        id,
        scenario,
        config.coverage_d,
        config.threshold_k,
        config.epoch_interval,
        Execution::default(),
    )?;
    let (topo, summary) = topology_for(&prepared, config.strategy, config.seed)?;
    run_prepared(config, &prepared, &topo, &summary)
}
