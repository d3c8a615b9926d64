#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::HashMap;

use common::*;
use meshpay::graph::{
    bfs_distances, closeness_centrality, component_labels, connected_components, diameter,
    is_connected, is_connected_dominating_set, mcds, minimum_spanning_tree, parse_edge_list,
    shortest_path, uniform_spanning_tree, write_edge_list,
};
use meshpay::Graph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_graph(&mut rng, n, p)
    })
}

fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..0.5, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_connected(&mut rng, n, p)
    })
}

#[test]
fn components_match_reachability_on_50_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [0.01, 0.03, 0.05, 0.1] {
        let g = random_graph(&mut rng, 50, p);
        let labels = component_labels(&g);
        let reach = reachability(&g);
        for u in 0..50 {
            for v in 0..50 {
                assert_eq!(
                    labels[u] == labels[v],
                    reach[u][v],
                    "pair ({u},{v}) at p={p}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn components_partition_vertices(g in arb_graph(30)) {
        let comps = connected_components(&g);
        let mut seen = vec![0; g.vertex_count()];
        for c in &comps {
            for &v in c {
                seen[v] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert_eq!(is_connected(&g), comps.len() == 1);
    }

    #[test]
    fn shortest_path_matches_floyd_warshall(g in arb_graph(20)) {
        let d = hop_distances(&g);
        for s in g.vertices() {
            let bfs = bfs_distances(&g, s).unwrap();
            prop_assert_eq!(&bfs, &d[s]);
            for t in g.vertices() {
                let p = shortest_path(&g, s, t).unwrap();
                match (p, d[s][t]) {
                    (None, None) => {}
                    (Some(p), Some(len)) => {
                        prop_assert_eq!(p.len(), len + 1);
                        prop_assert_eq!(p[0], s);
                        prop_assert_eq!(*p.last().unwrap(), t);
                        prop_assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
                    }
                    (p, len) => prop_assert!(false, "path {:?} vs distance {:?}", p, len),
                }
            }
        }
    }

    #[test]
    fn shortest_path_is_lexicographically_smallest(g in arb_connected(7)) {
        // enumerate all shortest paths by DFS and compare sequences
        let d = hop_distances(&g);
        for s in g.vertices() {
            for t in g.vertices() {
                let len = d[s][t].unwrap();
                let mut all = Vec::new();
                let mut cur = vec![s];
                fn rec(g: &Graph, d: &[Vec<Option<usize>>], t: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
                    let u = *cur.last().unwrap();
                    if u == t {
                        all.push(cur.clone());
                        return;
                    }
                    for &v in g.neighbors(u) {
                        if d[v][t] == Some(d[u][t].unwrap() - 1) {
                            cur.push(v);
                            rec(g, d, t, cur, all);
                            cur.pop();
                        }
                    }
                }
                rec(&g, &d, t, &mut cur, &mut all);
                let min = all.iter().min().unwrap();
                prop_assert_eq!(min.len(), len + 1);
                prop_assert_eq!(&shortest_path(&g, s, t).unwrap().unwrap(), min);
            }
        }
    }

    #[test]
    fn mst_is_spanning_subtree(g in arb_connected(40)) {
        let t = minimum_spanning_tree(&g).unwrap();
        prop_assert!(t.is_spanning_tree());
        prop_assert!(t.is_subgraph_of(&g));
        prop_assert_eq!(t.edge_count(), g.vertex_count() - 1);
        prop_assert_eq!(minimum_spanning_tree(&g).unwrap(), t);
    }

    #[test]
    fn ust_is_spanning_subtree_and_seed_deterministic(g in arb_connected(40), seed in any::<u64>()) {
        let a = uniform_spanning_tree(&g, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = uniform_spanning_tree(&g, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(a.is_spanning_tree());
        prop_assert!(a.is_subgraph_of(&g));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mcds_is_valid_and_within_twice_optimum(g in arb_connected(8)) {
        let ds = mcds(&g).unwrap();
        let member: Vec<bool> = g.vertices().map(|v| ds.contains(v)).collect();
        prop_assert!(is_connected_dominating_set(&g, &member));
        prop_assert!(ds.dominates(&g));
        let mask = ds.dominators().iter().fold(0u32, |m, &v| m | 1 << v);
        prop_assert!(mask_is_cds(&g, mask));
        let opt = brute_force_mcds_size(&g);
        prop_assert!(ds.len() <= 2 * opt, "greedy {} vs optimum {}", ds.len(), opt);
        let again = mcds(&g).unwrap();
        prop_assert_eq!(again.dominators(), ds.dominators());
    }

    #[test]
    fn cds_predicate_matches_oracle(g in arb_connected(7), mask in 1u32..128) {
        let n = g.vertex_count();
        let mask = mask & ((1u32 << n) - 1);
        let member: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        prop_assert_eq!(is_connected_dominating_set(&g, &member), mask != 0 && mask_is_cds(&g, mask));
    }

    #[test]
    fn closeness_and_diameter_match_distance_oracle(g in arb_connected(15)) {
        prop_assume!(g.vertex_count() >= 2);
        let d = hop_distances(&g);
        let n = g.vertex_count();
        let mut diam = 0;
        for i in 0..n {
            let sum: usize = d[i].iter().map(|x| x.unwrap()).sum();
            diam = diam.max(d[i].iter().map(|x| x.unwrap()).max().unwrap());
            let cc = closeness_centrality(&g, i).unwrap();
            prop_assert!((cc - (n - 1) as f64 / sum as f64).abs() < 1e-12);
        }
        prop_assert_eq!(diameter(&g).unwrap(), diam);
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(25)) {
        let text = write_edge_list(&g, &[("note", "x".into())]);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g);
    }
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices.
fn connected_graphs_up_to_isomorphism(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let mut perms = vec![vec![]];
    for k in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    let canon = |mask: u32| {
        perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .fold(0u32, |m, (_, &(u, v))| {
                        let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                        m | 1 << pairs.iter().position(|&e| e == (a, b)).unwrap()
                    })
            })
            .min()
            .unwrap()
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let g = Graph::from_edges(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        )
        .unwrap();
        if is_connected(&g) && seen.insert(canon(mask)) {
            out.push(g);
        }
    }
    out
}

#[test]
fn isomorphism_class_counts() {
    let counts: Vec<usize> = (1..=5)
        .map(|n| connected_graphs_up_to_isomorphism(n).len())
        .collect();
    assert_eq!(counts, [1, 1, 2, 6, 21]);
}

#[test]
fn ust_is_uniform_on_every_connected_graph_up_to_five_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 3..=5 {
        for g in connected_graphs_up_to_isomorphism(n) {
            let trees = spanning_trees(&g);
            if trees.len() < 2 {
                assert_eq!(uniform_spanning_tree(&g, &mut rng).unwrap(), g);
                continue;
            }
            let index: HashMap<_, _> = trees
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, t)| (t, i))
                .collect();
            let mut counts = vec![0u64; trees.len()];
            for _ in 0..1000 * trees.len() {
                let t = uniform_spanning_tree(&g, &mut rng).unwrap();
                counts[index[&edge_set(&t)]] += 1;
            }
            let p = chi_square_p(&counts);
            assert!(
                p > 0.001,
                "{:?}: {} trees, counts {counts:?}, p={p}",
                edge_set(&g),
                trees.len()
            );
        }
    }
}

#[test]
fn cayley_count_for_k4_and_k5() {
    assert_eq!(spanning_trees(&Graph::complete(4)).len(), 16);
    assert_eq!(spanning_trees(&Graph::complete(5)).len(), 125);
}
