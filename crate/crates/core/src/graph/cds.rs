use super::{require_connected, Graph, GraphError, Vertex};

/// A connected dominating set together with the fingerprint of the graph it
/// was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatingSet {
    dominators: Vec<Vertex>,
    membership: Vec<bool>,
    host: String,
}

impl DominatingSet {
    /// Dominators in ascending order.
    pub fn dominators(&self) -> &[Vertex] {
        &self.dominators
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.membership.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.dominators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominators.is_empty()
    }

    /// Fingerprint of the host graph.
    pub fn host(&self) -> &str {
        &self.host
    }

    pub fn dominates(&self, g: &Graph) -> bool {
        g.fingerprint() == self.host && is_connected_dominating_set(g, &self.membership)
    }
}

/// Checks both predicates: the members induce a connected subgraph, and every
/// non-member has a member neighbor. An empty member set is never valid on a
/// non-empty graph.
pub fn is_connected_dominating_set(g: &Graph, member: &[bool]) -> bool {
    let n = g.vertex_count();
    if member.len() != n {
        return false;
    }
    let Some(first) = member.iter().position(|&m| m) else {
        return n == 0;
    };
    for v in 0..n {
        if !member[v] && !g.neighbors(v).iter().any(|&u| member[u]) {
            return false;
        }
    }
    let mut seen = vec![false; n];
    seen[first] = true;
    let mut stack = vec![first];
    let mut reached = 1;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if member[v] && !seen[v] {
                seen[v] = true;
                reached += 1;
                stack.push(v);
            }
        }
    }
    reached == member.iter().filter(|&&m| m).count()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Color {
    White,
    Gray,
    Black,
}

/// Greedy connected dominating set.
///
/// Grows a dominator tree from the highest-degree vertex, repeatedly
/// promoting the gray (covered, non-dominator) vertex with the most white
/// (uncovered) neighbors. A final pass drops dominators whose removal keeps
/// the set a connected dominating set. Every tie goes to the lowest id.
pub fn mcds(g: &Graph) -> Result<DominatingSet, GraphError> {
    require_connected(g)?;
    let n = g.vertex_count();
    let mut color = vec![Color::White; n];

    let start = (0..n)
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .unwrap_or(0);
    let mut white = n;
    let blacken = |v: Vertex, color: &mut Vec<Color>, white: &mut usize| {
        if color[v] == Color::White {
            *white -= 1;
        }
        color[v] = Color::Black;
        for &u in g.neighbors(v) {
            if color[u] == Color::White {
                color[u] = Color::Gray;
                *white -= 1;
            }
        }
    };
    blacken(start, &mut color, &mut white);

    while white > 0 {
        let mut best: Option<(usize, Vertex)> = None;
        for v in 0..n {
            if color[v] != Color::Gray {
                continue;
            }
            let gain = g
                .neighbors(v)
                .iter()
                .filter(|&&u| color[u] == Color::White)
                .count();
            if gain > best.map_or(0, |b| b.0) {
                best = Some((gain, v));
            }
        }
        // A connected graph with white vertices left always has a gray
        // vertex bordering one of them.
        let (_, pick) = best.expect("gray frontier touches every white vertex");
        blacken(pick, &mut color, &mut white);
    }

    let mut member: Vec<bool> = color.iter().map(|&c| c == Color::Black).collect();
    prune(g, &mut member);

    Ok(DominatingSet {
        dominators: (0..n).filter(|&v| member[v]).collect(),
        membership: member,
        host: g.fingerprint(),
    })
}

fn prune(g: &Graph, member: &mut [bool]) {
    let mut order: Vec<Vertex> = (0..member.len()).filter(|&v| member[v]).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    for v in order {
        if member.iter().filter(|&&m| m).count() == 1 {
            break;
        }
        member[v] = false;
        if !is_connected_dominating_set(g, member) {
            member[v] = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_center() {
        let g = Graph::from_edges(6, (1..6).map(|l| (0, l))).unwrap();
        assert_eq!(mcds(&g).unwrap().dominators(), &[0]);
    }

    #[test]
    fn path_of_four() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(mcds(&g).unwrap().dominators(), &[1, 2]);
    }

    #[test]
    fn path_of_three() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(mcds(&g).unwrap().dominators(), &[1]);
    }

    #[test]
    fn tiny_graphs() {
        assert_eq!(mcds(&Graph::new(1)).unwrap().dominators(), &[0]);
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(mcds(&edge).unwrap().dominators(), &[0]);
        assert_eq!(mcds(&Graph::new(0)), Err(GraphError::Empty));
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(mcds(&g), Err(GraphError::Disconnected(2)));
    }

    #[test]
    fn result_validates_against_host() {
        let g =
            Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 5)]).unwrap();
        let d = mcds(&g).unwrap();
        assert!(d.dominates(&g));
        let other = Graph::complete(7);
        assert!(!d.dominates(&other));
    }

    #[test]
    fn predicate_rejects_disconnected_members() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let m = [false, true, false, true, false];
        assert!(!is_connected_dominating_set(&g, &m));
        let m = [false, true, true, true, false];
        assert!(is_connected_dominating_set(&g, &m));
    }
}
