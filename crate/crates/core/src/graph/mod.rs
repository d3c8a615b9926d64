//! Undirected simple graphs over dense vertex ids `0..n` and the classical
//! algorithms the topology strategies are built from.

mod cds;
mod centrality;
mod components;
mod edgelist;
mod mst;
pub(crate) mod paths;
mod ust;

pub use cds::{is_connected_dominating_set, mcds, DominatingSet};
pub use centrality::{closeness_centrality, diameter, mean_closeness_centrality};
pub use components::{component_labels, connected_components, is_connected};
pub use edgelist::{parse_edge_list, write_edge_list};
pub use mst::{minimum_spanning_tree, minimum_spanning_tree_by};
pub use paths::{bfs_distances, shortest_path};
pub use ust::uniform_spanning_tree;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph needs at least {0} vertices")]
    TooSmall(usize),
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An undirected simple graph. Adjacency lists are kept sorted by vertex id,
/// so every traversal that walks neighbors in list order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edges: usize,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: 0,
        }
    }

    /// Builds a graph from an edge iterator. Duplicate edges collapse into one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            g.adj[u] = (0..n).filter(|&v| v != u).collect();
        }
        g.edges = n * n.saturating_sub(1) / 2;
        g
    }

    /// Inserts the edge `{u, v}`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edges += 1;
                Ok(true)
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.adj.len()
    }

    pub(crate) fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// Neighbors of `v` in ascending id order.
    ///
    /// Panics if `v` is not a vertex.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u) && self.adj[u].binary_search(&v).is_ok()
    }

    /// Every edge once as `(min, max)`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    /// Isolated vertices (degree zero).
    pub fn isolated(&self) -> Vec<Vertex> {
        self.vertices()
            .filter(|&v| self.adj[v].is_empty())
            .collect()
    }

    /// True when both graphs share a vertex set and every edge of `self`
    /// appears in `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    /// Connected with exactly `|V| - 1` edges.
    pub fn is_spanning_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0 && self.edges == n - 1 && is_connected(self)
    }

    /// Stable content hash over the vertex count and canonical edge list.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.vertex_count() as u64).to_le_bytes());
        for (u, v) in self.edges() {
            h.update((u as u64).to_le_bytes());
            h.update((v as u64).to_le_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }
}

pub(crate) fn require_connected(g: &Graph) -> Result<(), GraphError> {
    if g.vertex_count() == 0 {
        return Err(GraphError::Empty);
    }
    let comps = connected_components(g);
    if comps.len() > 1 {
        return Err(GraphError::Disconnected(comps.len()));
    }
    Ok(())
}
