use rand::Rng;

use super::{require_connected, Graph, GraphError};

/// Samples a spanning tree uniformly at random with Wilson's algorithm.
///
/// The walk is rooted at vertex 0 and starts new walks from the remaining
/// vertices in ascending order; each step picks a neighbor uniformly from the
/// sorted adjacency list. Loop erasure happens implicitly: revisiting a vertex
/// overwrites its successor pointer, so only the last exit from each vertex
/// survives.
pub fn uniform_spanning_tree<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Graph, GraphError> {
    require_connected(g)?;
    let n = g.vertex_count();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[0] = true;
    let mut tree = Graph::new(n);

    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let nbrs = g.neighbors(u);
            next[u] = nbrs[rng.random_range(0..nbrs.len())];
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            tree.add_edge(u, next[u])?;
            u = next[u];
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tree_input_is_returned_unchanged() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            assert_eq!(uniform_spanning_tree(&g, &mut rng).unwrap(), g);
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let g = Graph::complete(12);
        let a = uniform_spanning_tree(&g, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = uniform_spanning_tree(&g, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_spanning_tree() && a.is_subgraph_of(&g));
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            uniform_spanning_tree(&g, &mut rng),
            Err(GraphError::Disconnected(2))
        );
    }

    #[test]
    fn single_vertex_gives_empty_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            uniform_spanning_tree(&Graph::new(1), &mut rng)
                .unwrap()
                .edge_count(),
            0
        );
    }
}
