use super::{require_connected, Graph, GraphError, Vertex};

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal over pre-ordered edges; returns the accepted edges.
pub(crate) fn kruskal<I>(n: usize, ordered: I) -> Vec<(Vertex, Vertex)>
where
    I: IntoIterator<Item = (Vertex, Vertex)>,
{
    let mut sets = DisjointSets::new(n);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for (u, v) in ordered {
        if sets.union(u, v) {
            out.push((u, v));
            if out.len() + 1 == n {
                break;
            }
        }
    }
    out
}

/// Unit-weight minimum spanning tree: edges are taken in ascending
/// `(min endpoint, max endpoint)` order.
pub fn minimum_spanning_tree(g: &Graph) -> Result<Graph, GraphError> {
    require_connected(g)?;
    let tree = kruskal(g.vertex_count(), g.edges());
    Graph::from_edges(g.vertex_count(), tree)
}

/// Weighted variant. Ties in weight fall back to the canonical edge order.
pub fn minimum_spanning_tree_by<F>(g: &Graph, mut weight: F) -> Result<Graph, GraphError>
where
    F: FnMut(Vertex, Vertex) -> f64,
{
    require_connected(g)?;
    let mut edges: Vec<_> = g.edges().map(|(u, v)| (weight(u, v), u, v)).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let tree = kruskal(g.vertex_count(), edges.into_iter().map(|(_, u, v)| (u, v)));
    Graph::from_edges(g.vertex_count(), tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_is_fixed_point() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(minimum_spanning_tree(&g).unwrap(), g);
    }

    #[test]
    fn triangle_keeps_lowest_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = minimum_spanning_tree(&g).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn six_vertex_cycle_graph() {
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]).unwrap();
        let t = minimum_spanning_tree(&g).unwrap();
        assert_eq!(t.edge_count(), 5);
        assert!(t.is_spanning_tree() && t.is_subgraph_of(&g));
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(minimum_spanning_tree(&g), Err(GraphError::Disconnected(2)));
    }

    #[test]
    fn weighted_prefers_light_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t =
            minimum_spanning_tree_by(&g, |u, v| if (u, v) == (0, 1) { 5.0 } else { 1.0 }).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn single_vertex_tree_is_empty() {
        let t = minimum_spanning_tree(&Graph::new(1)).unwrap();
        assert_eq!(t.edge_count(), 0);
    }
}
