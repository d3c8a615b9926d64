//! Test oracles: random graph generators and brute-force reference
//! implementations. Every oracle here is exponential or cubic and trusts
//! nothing from the library except `Graph` storage.

#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments)]

use std::collections::BTreeSet;

use meshpay::payment::{ChannelNetwork, Sat};
use meshpay::{Graph, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected graph: a random labelled tree plus each remaining pair
/// with probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        g.add_edge(order[i], parent).unwrap();
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Erdos-Renyi graph, possibly disconnected.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Floyd-Warshall reachability matrix.
pub fn reachability(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for u in 0..n {
        r[u][u] = true;
        for &v in g.neighbors(u) {
            r[u][v] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// All-pairs hop distances by Floyd-Warshall; `None` when unreachable.
pub fn hop_distances(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.vertex_count();
    let mut d = vec![vec![None; n]; n];
    for u in 0..n {
        d[u][u] = Some(0);
        for &v in g.neighbors(u) {
            d[u][v] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn mask_connected(g: &Graph, mask: u32) -> bool {
    let Some(start) = (0..g.vertex_count()).find(|&v| mask >> v & 1 == 1) else {
        return false;
    };
    let mut seen = 1u32 << start;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if mask >> v & 1 == 1 && seen >> v & 1 == 0 {
                seen |= 1 << v;
                stack.push(v);
            }
        }
    }
    seen == mask
}

/// Connected-dominating-set predicate over a bitmask (n <= 31).
pub fn mask_is_cds(g: &Graph, mask: u32) -> bool {
    let dominated = (0..g.vertex_count())
        .all(|v| mask >> v & 1 == 1 || g.neighbors(v).iter().any(|&u| mask >> u & 1 == 1));
    dominated && mask_connected(g, mask)
}

/// Size of a minimum connected dominating set by exhaustive search.
pub fn brute_force_mcds_size(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 16, "exhaustive search only");
    (1u32..(1 << n))
        .filter(|&m| mask_is_cds(g, m))
        .map(|m| m.count_ones() as usize)
        .min()
        .expect("connected graphs have a CDS")
}

pub type EdgeSet = BTreeSet<(Vertex, Vertex)>;

pub fn edge_set(g: &Graph) -> EdgeSet {
    g.edges().collect()
}

/// Every spanning tree of `g`, as canonical edge sets, by exhaustive subset
/// enumeration over `n - 1` edges.
pub fn spanning_trees(g: &Graph) -> Vec<EdgeSet> {
    let n = g.vertex_count();
    let edges: Vec<_> = g.edges().collect();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(
        edges: &[(Vertex, Vertex)],
        start: usize,
        need: usize,
        n: usize,
        pick: &mut Vec<(Vertex, Vertex)>,
        out: &mut Vec<EdgeSet>,
    ) {
        if need == 0 {
            let t = Graph::from_edges(n, pick.iter().copied()).unwrap();
            if t.is_spanning_tree() {
                out.push(pick.iter().copied().collect());
            }
            return;
        }
        for i in start..edges.len() {
            pick.push(edges[i]);
            rec(edges, i + 1, need - 1, n, pick, out);
            pick.pop();
        }
    }
    rec(&edges, 0, n.saturating_sub(1), n, &mut pick, &mut out);
    out
}

/// Outcome of routing by exhaustive simple-path enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOutcome {
    NoMesh,
    NoCapacity,
    /// Minimum feasible hop count.
    Success(usize),
}

/// Classifies a payment by enumerating every simple channel path from
/// `src` to `dst`. A path is feasible when every hop stays in `allowed` and
/// has forward spendable balance of at least `amount`.
pub fn route_oracle(
    net: &ChannelNetwork,
    mesh: &Graph,
    src: Vertex,
    dst: Vertex,
    amount: Sat,
    restrict_hops: bool,
) -> OracleOutcome {
    let reach = reachability(mesh);
    if !reach[src][dst] {
        return OracleOutcome::NoMesh;
    }
    let allowed: Vec<bool> = (0..net.nodes())
        .map(|v| !restrict_hops || reach[src][v])
        .collect();
    let mut best: Option<usize> = None;
    let mut on_path = vec![false; net.nodes()];
    fn dfs(
        net: &ChannelNetwork,
        allowed: &[bool],
        u: Vertex,
        dst: Vertex,
        amount: Sat,
        hops: usize,
        on_path: &mut [bool],
        best: &mut Option<usize>,
    ) {
        if u == dst {
            *best = Some(best.map_or(hops, |b| b.min(hops)));
            return;
        }
        on_path[u] = true;
        for v in 0..net.nodes() {
            if on_path[v] || !allowed[v] {
                continue;
            }
            if net.spendable(u, v).is_some_and(|s| s >= amount) {
                dfs(net, allowed, v, dst, amount, hops + 1, on_path, best);
            }
        }
        on_path[u] = false;
    }
    dfs(net, &allowed, src, dst, amount, 0, &mut on_path, &mut best);
    best.map_or(OracleOutcome::NoCapacity, OracleOutcome::Success)
}

/// Chi-square statistic of observed counts against a uniform expectation.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

pub fn chi_square_p(counts: &[u64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let dof = (counts.len() - 1) as f64;
    1.0 - ChiSquared::new(dof)
        .unwrap()
        .cdf(chi_square_uniform(counts))
}
