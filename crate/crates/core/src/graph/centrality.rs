use super::{bfs_distances, require_connected, Graph, GraphError, Vertex};

/// `(N - 1) / sum_j d(i, j)` over hop distances.
pub fn closeness_centrality(g: &Graph, i: Vertex) -> Result<f64, GraphError> {
    g.check(i)?;
    let n = g.vertex_count();
    if n < 2 {
        return Err(GraphError::TooSmall(2));
    }
    let dist = bfs_distances(g, i)?;
    let mut total = 0usize;
    let mut unreachable = false;
    for d in &dist {
        match d {
            Some(d) => total += d,
            None => unreachable = true,
        }
    }
    if unreachable {
        return Err(GraphError::Disconnected(
            super::connected_components(g).len(),
        ));
    }
    Ok((n - 1) as f64 / total as f64)
}

/// Mean closeness over all vertices.
pub fn mean_closeness_centrality(g: &Graph) -> Result<f64, GraphError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(GraphError::TooSmall(2));
    }
    require_connected(g)?;
    let mut sum = 0.0;
    for v in g.vertices() {
        sum += closeness_centrality(g, v)?;
    }
    Ok(sum / n as f64)
}

/// Largest eccentricity in hops.
pub fn diameter(g: &Graph) -> Result<usize, GraphError> {
    require_connected(g)?;
    let mut best = 0;
    for v in g.vertices() {
        let far = bfs_distances(g, v)?
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0);
        best = best.max(far);
    }
    Ok(best)
}
