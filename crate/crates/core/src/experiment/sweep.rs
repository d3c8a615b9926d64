use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::run::{prepare, run_prepared, topology_for, RunResult};
use super::{ExperimentError, SweepGrid};
use crate::assign::Strategy;
use crate::par::{self, Execution};
use crate::payment::Sat;
use crate::scenario::Scenario;

#[derive(Debug, Clone)]
pub struct ScenarioInput {
    pub id: String,
    pub scenario: Scenario,
}

/// A run that did not produce metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub scenario: String,
    pub strategy: Strategy,
    pub n_per_epoch: usize,
    pub investment: Sat,
    pub seed: u64,
    pub error: String,
}

pub type SweepRow = Result<RunResult, RunFailure>;

/// Rows in run-index order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn results(&self) -> impl Iterator<Item = &RunResult> {
        self.rows.iter().filter_map(|r| r.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &RunFailure> {
        self.rows.iter().filter_map(|r| r.as_ref().err())
    }

    pub fn has_errors(&self) -> bool {
        self.failures().next().is_some()
    }
}

pub fn sweep(grid: &SweepGrid, scenarios: &[ScenarioInput]) -> Result<SweepTable, ExperimentError> {
    sweep_with(grid, scenarios, Execution::default(), |_| {})
}

/// Runs the Cartesian product of the grid over every scenario.
///
/// Scenario `i` is seeded with `seed_base + i`; all strategies, payment
/// rates and investments on that scenario share the seed, so they see the
/// same workload and the same UST sample. Rows are handed to `on_row` in run
/// order once each scenario finishes, whatever the thread scheduling.
pub fn sweep_with(
    grid: &SweepGrid,
    scenarios: &[ScenarioInput],
    mode: Execution,
    mut on_row: impl FnMut(&SweepRow),
) -> Result<SweepTable, ExperimentError> {
    grid.validate()?;
    if scenarios.is_empty() {
        return Err(ExperimentError::Config(
            "sweep needs at least one scenario".into(),
        ));
    }
    let mut jobs = Vec::with_capacity(grid.runs_per_scenario());
    for (si, &strategy) in grid.strategies.iter().enumerate() {
        for &investment in &grid.investments {
            for &n in &grid.payments_per_epoch {
                jobs.push((si, strategy, investment, n));
            }
        }
    }

    let mut table = SweepTable::default();
    for (index, input) in scenarios.iter().enumerate() {
        let seed = grid.seed_base.wrapping_add(index as u64);
        let fail = |strategy, n, investment, err: &ExperimentError| RunFailure {
            scenario: input.id.clone(),
            strategy,
            n_per_epoch: n,
            investment,
            seed,
            error: err.to_string(),
        };
        let rows: Vec<SweepRow> = match prepare(
            input.id.clone(),
            &input.scenario,
            grid.coverage_d,
            grid.threshold_k,
            grid.epoch_interval,
            mode,
        ) {
            Err(e) => jobs
                .iter()
                .map(|&(_, s, inv, n)| Err(fail(s, n, inv, &e)))
                .collect(),
            Ok(prepared) => {
                let topologies = par::map_slice(&grid.strategies, mode, |&s| {
                    topology_for(&prepared, s, seed)
                });
                par::map_slice(&jobs, mode, |&(si, strategy, investment, n)| {
                    let (topo, summary) = topologies[si]
                        .as_ref()
                        .map_err(|e| fail(strategy, n, investment, e))?;
                    let config = grid.config(strategy, n, investment, seed);
                    run_prepared(&config, &prepared, topo, summary)
                        .map_err(|e| fail(strategy, n, investment, &e))
                })
            }
        };
        for row in rows {
            on_row(&row);
            table.rows.push(row);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CellKey {
    pub strategy: Strategy,
    pub nodes: usize,
    pub n_per_epoch: usize,
    pub investment: Sat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMean {
    pub key: CellKey,
    pub mean_success_rate: f64,
    pub runs: usize,
}

/// Mean success rate per (strategy, nodes, N, investment) across scenarios.
pub fn cell_means<'a>(results: impl IntoIterator<Item = &'a RunResult>) -> Vec<CellMean> {
    let mut cells: BTreeMap<CellKey, (f64, usize)> = BTreeMap::new();
    for r in results {
        let key = CellKey {
            strategy: r.strategy,
            nodes: r.nodes,
            n_per_epoch: r.n_per_epoch,
            investment: r.investment,
        };
        let e = cells.entry(key).or_default();
        e.0 += r.success_rate;
        e.1 += 1;
    }
    cells
        .into_iter()
        .map(|(key, (sum, runs))| CellMean {
            key,
            mean_success_rate: sum / runs as f64,
            runs,
        })
        .collect()
}
