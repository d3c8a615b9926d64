use super::{Graph, Vertex};

/// Component label per vertex. Components are numbered in order of their
/// smallest vertex.
pub fn component_labels(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Partition of the vertex set into connected components. Each component is
/// sorted, and components are ordered by their smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<Vertex>> {
    let labels = component_labels(g);
    let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
    let mut parts = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        parts[l].push(v);
    }
    parts
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).len() <= 1
}
