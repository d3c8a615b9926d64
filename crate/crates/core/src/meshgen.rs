//! Proximity snapshots and the occurrence-thresholded mobility-aware mesh.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{connected_components, Graph, Vertex};
use crate::par::{self, Execution};
use crate::scenario::DistanceTable;

pub const DEFAULT_COVERAGE_M: f64 = 90.0;
pub const DEFAULT_THRESHOLD_K: usize = 5;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("epoch {epoch} outside table of {epochs} epochs")]
    EpochOutOfRange { epoch: usize, epochs: usize },
    #[error("coverage distance must be positive, got {0}")]
    BadCoverage(f64),
    #[error("threshold k must be at least 1")]
    BadThreshold,
    #[error("threshold k={k} exceeds the {epochs} epochs in the table")]
    ThresholdTooLarge { k: usize, epochs: usize },
}

/// Proximity graph of all nodes at one epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSnapshot {
    pub epoch_index: usize,
    pub graph: Graph,
}

/// Edge `(u, v)` iff the pair was within `coverage` in at least `threshold`
/// sampled epochs.
#[derive(Debug, Clone, PartialEq)]
pub struct MobilityAwareMesh {
    pub graph: Graph,
    pub threshold: usize,
    pub coverage: f64,
}

impl MobilityAwareMesh {
    pub fn nodes(&self) -> usize {
        self.graph.vertex_count()
    }
}

fn check_coverage(d: f64) -> Result<(), MeshError> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(MeshError::BadCoverage(d))
    }
}

fn pair_edges(nodes: usize, dists: &[f64], mut keep: impl FnMut(usize, f64) -> bool) -> Graph {
    let mut g = Graph::new(nodes);
    let mut k = 0;
    for i in 0..nodes {
        for j in (i + 1)..nodes {
            if keep(k, dists[k]) {
                // ids are in range and distinct by construction
                g.add_edge(i, j).expect("valid pair");
            }
            k += 1;
        }
    }
    g
}

/// Proximity graph at `epoch`; a pair exactly `coverage` apart is connected.
pub fn snapshot(
    dist: &DistanceTable,
    epoch: usize,
    coverage: f64,
) -> Result<MeshSnapshot, MeshError> {
    check_coverage(coverage)?;
    if epoch >= dist.epochs() {
        return Err(MeshError::EpochOutOfRange {
            epoch,
            epochs: dist.epochs(),
        });
    }
    let graph = pair_edges(dist.nodes(), dist.epoch_slice(epoch), |_, d| d <= coverage);
    Ok(MeshSnapshot {
        epoch_index: epoch,
        graph,
    })
}

/// Snapshots for every epoch in the table.
pub fn snapshots(
    dist: &DistanceTable,
    coverage: f64,
    mode: Execution,
) -> Result<Vec<MeshSnapshot>, MeshError> {
    check_coverage(coverage)?;
    par::map_range(dist.epochs(), mode, |e| snapshot(dist, e, coverage))
        .into_iter()
        .collect()
}

/// Counts, per pair, the epochs in which the pair was within `coverage`, and
/// keeps pairs reaching `threshold`.
pub fn mobility_aware_mesh(
    dist: &DistanceTable,
    coverage: f64,
    threshold: usize,
) -> Result<MobilityAwareMesh, MeshError> {
    check_coverage(coverage)?;
    if threshold == 0 {
        return Err(MeshError::BadThreshold);
    }
    if threshold > dist.epochs() {
        return Err(MeshError::ThresholdTooLarge {
            k: threshold,
            epochs: dist.epochs(),
        });
    }
    let mut counts = vec![0usize; dist.pair_count()];
    for e in 0..dist.epochs() {
        for (c, &d) in counts.iter_mut().zip(dist.epoch_slice(e)) {
            if d <= coverage {
                *c += 1;
            }
        }
    }
    let graph = pair_edges(dist.nodes(), dist.epoch_slice(0), |k, _| {
        counts[k] >= threshold
    });
    Ok(MobilityAwareMesh {
        graph,
        threshold,
        coverage,
    })
}

/// Connectivity screen outcome for a mobility-aware mesh.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenReport {
    pub connected: bool,
    /// Nodes with no mesh link at all.
    pub isolated: Vec<Vertex>,
    /// Component sizes, largest first.
    pub component_sizes: Vec<usize>,
}

impl ScreenReport {
    pub fn passed(&self) -> bool {
        self.connected
    }

    pub fn describe(&self) -> String {
        if self.connected {
            "connected".into()
        } else if !self.isolated.is_empty() {
            format!(
                "{} components; isolated nodes {:?}",
                self.component_sizes.len(),
                self.isolated
            )
        } else {
            format!(
                "{} components of sizes {:?}",
                self.component_sizes.len(),
                self.component_sizes
            )
        }
    }
}

/// Passes iff the mesh is one component spanning every node.
pub fn screen_connectivity(mesh: &MobilityAwareMesh) -> ScreenReport {
    let comps = connected_components(&mesh.graph);
    let mut sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    ScreenReport {
        connected: comps.len() == 1,
        isolated: mesh.graph.isolated(),
        component_sizes: sizes,
    }
}
