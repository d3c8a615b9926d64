use std::collections::VecDeque;

use super::{Graph, GraphError, Vertex};

/// Hop distances from `src`; `None` for unreachable vertices.
pub fn bfs_distances(g: &Graph, src: Vertex) -> Result<Vec<Option<usize>>, GraphError> {
    g.check(src)?;
    let mut dist = vec![None; g.vertex_count()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or_default();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// Minimum-hop path from `src` to `dst`. Among equal-length paths the
/// lexicographically smallest vertex sequence wins.
///
/// Breadth-first search over sorted adjacency with a FIFO queue discovers each
/// layer in lexicographic order of the smallest paths reaching it, so the first
/// parent assigned to a vertex is on its lexicographically smallest shortest path.
pub fn shortest_path(
    g: &Graph,
    src: Vertex,
    dst: Vertex,
) -> Result<Option<Vec<Vertex>>, GraphError> {
    g.check(src)?;
    g.check(dst)?;
    Ok(lex_bfs(g.vertex_count(), src, dst, |u| {
        g.neighbors(u).iter().copied()
    }))
}

/// Shared search used by both plain graphs and the payment engine's
/// feasibility-filtered channel graph. `neighbors` must yield ascending ids.
pub(crate) fn lex_bfs<F, I>(
    n: usize,
    src: Vertex,
    dst: Vertex,
    mut neighbors: F,
) -> Option<Vec<Vertex>>
where
    F: FnMut(Vertex) -> I,
    I: Iterator<Item = Vertex>,
{
    if src == dst {
        return Some(vec![src]);
    }
    let mut parent = vec![usize::MAX; n];
    parent[src] = src;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for v in neighbors(u) {
            if parent[v] != usize::MAX {
                continue;
            }
            parent[v] = u;
            if v == dst {
                let mut path = vec![dst];
                let mut cur = dst;
                while cur != src {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(v);
        }
    }
    None
}
