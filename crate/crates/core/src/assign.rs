//! Channel-assignment strategies: which mesh links get a payment channel.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{
    self, diameter, mcds, mean_closeness_centrality, minimum_spanning_tree, uniform_spanning_tree,
    Graph, GraphError, Vertex,
};
use crate::meshgen::MobilityAwareMesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Cds,
    Ust,
    Baseline,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Cds, Strategy::Ust, Strategy::Baseline];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Cds => "cds",
            Strategy::Ust => "ust",
            Strategy::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cds" => Ok(Strategy::Cds),
            "ust" => Ok(Strategy::Ust),
            "baseline" => Ok(Strategy::Baseline),
            other => Err(format!(
                "unknown strategy {other:?} (expected cds, ust or baseline)"
            )),
        }
    }
}

/// A channel topology derived from a mobility-aware mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct LnTopology {
    pub graph: Graph,
    pub strategy: Strategy,
    /// Fingerprint of the mesh this was derived from.
    pub mesh_hash: String,
    /// Sampling seed, UST only.
    pub seed: Option<u64>,
    /// Dominator set size, CDS only.
    pub dominators: Option<Vec<Vertex>>,
}

impl LnTopology {
    pub fn channel_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Edge-list export with provenance header.
    pub fn to_edge_list(&self) -> String {
        let mut header = vec![
            ("strategy", self.strategy.to_string()),
            ("mesh", self.mesh_hash.clone()),
            ("channels", self.channel_count().to_string()),
        ];
        if let Some(seed) = self.seed {
            header.push(("seed", seed.to_string()));
        }
        if let Some(d) = &self.dominators {
            header.push(("dominators", d.len().to_string()));
        }
        graph::write_edge_list(&self.graph, &header)
    }
}

/// Dominator tree plus one attachment edge per dominatee.
///
/// The dominator-induced subgraph is reduced to a spanning tree, then every
/// dominatee, in ascending id order, links to its lowest-id dominator
/// neighbor.
pub fn assign_cds(mesh: &MobilityAwareMesh) -> Result<LnTopology, GraphError> {
    let g = &mesh.graph;
    let ds = mcds(g)?;
    let n = g.vertex_count();

    let induced = Graph::from_edges(
        n,
        g.edges().filter(|&(u, v)| ds.contains(u) && ds.contains(v)),
    )?;
    // The MST runs on the dominators alone; relabel so isolated dominatees
    // don't trip the connectivity check.
    let ids = ds.dominators();
    let local = |v: Vertex| ids.binary_search(&v).expect("dominator");
    let core = Graph::from_edges(
        ids.len(),
        induced.edges().map(|(u, v)| (local(u), local(v))),
    )?;
    let core_tree = minimum_spanning_tree(&core)?;

    let mut tree = Graph::new(n);
    for (a, b) in core_tree.edges() {
        tree.add_edge(ids[a], ids[b])?;
    }
    for v in g.vertices().filter(|&v| !ds.contains(v)) {
        let dom = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&u| ds.contains(u))
            .expect("dominatee has a dominator neighbor");
        tree.add_edge(v, dom)?;
    }
    Ok(LnTopology {
        graph: tree,
        strategy: Strategy::Cds,
        mesh_hash: g.fingerprint(),
        seed: None,
        dominators: Some(ids.to_vec()),
    })
}

/// Uniformly random spanning tree of the mesh.
pub fn assign_ust(mesh: &MobilityAwareMesh, seed: u64) -> Result<LnTopology, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = uniform_spanning_tree(&mesh.graph, &mut rng)?;
    Ok(LnTopology {
        graph: tree,
        strategy: Strategy::Ust,
        mesh_hash: mesh.graph.fingerprint(),
        seed: Some(seed),
        dominators: None,
    })
}

/// One channel per mesh link.
pub fn assign_baseline(mesh: &MobilityAwareMesh) -> LnTopology {
    LnTopology {
        graph: mesh.graph.clone(),
        strategy: Strategy::Baseline,
        mesh_hash: mesh.graph.fingerprint(),
        seed: None,
        dominators: None,
    }
}

pub fn assign(
    mesh: &MobilityAwareMesh,
    strategy: Strategy,
    seed: u64,
) -> Result<LnTopology, GraphError> {
    match strategy {
        Strategy::Cds => assign_cds(mesh),
        Strategy::Ust => assign_ust(mesh, seed),
        Strategy::Baseline => Ok(assign_baseline(mesh)),
    }
}

/// Structural summary of a channel topology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    pub edges: usize,
    /// `histogram[d]` = number of vertices with degree `d`.
    pub degree_histogram: Vec<usize>,
    pub degree_variance: f64,
    pub mean_closeness: f64,
    pub diameter: usize,
}

/// Population variance of the degree sequence.
pub fn degree_variance(g: &Graph) -> f64 {
    let deg = g.degrees();
    if deg.is_empty() {
        return 0.0;
    }
    let n = deg.len() as f64;
    let mean = deg.iter().sum::<usize>() as f64 / n;
    deg.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n
}

pub fn topology_report(t: &LnTopology) -> Result<TopologyReport, GraphError> {
    let g = &t.graph;
    let deg = g.degrees();
    let mut hist = vec![0; deg.iter().max().map_or(0, |m| m + 1)];
    for d in deg {
        hist[d] += 1;
    }
    Ok(TopologyReport {
        edges: g.edge_count(),
        degree_histogram: hist,
        degree_variance: degree_variance(g),
        mean_closeness: mean_closeness_centrality(g)?,
        diameter: diameter(g)?,
    })
}
