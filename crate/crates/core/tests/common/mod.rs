#![allow(dead_code)]

use glkh::graph::{LabeledGraph, Sign, State, Vertex};
use glkh::pu::random_pu_graph;
use proptest::prelude::*;

/// Oriented bipartite graph from part and sign vectors and one cell per pair:
/// 0 no edge, 1 `i -> j`, 2 `j -> i`; same-part pairs are skipped.
pub fn build(parts: &[u8], minus: &[bool], cells: &[u8]) -> LabeledGraph {
    let n = parts.len();
    let vertices = (0..n)
        .map(|i| Vertex::new(format!("v{i}"), parts[i], if minus[i] { Sign::Minus } else { Sign::Plus }))
        .collect();
    let mut g = LabeledGraph::new(vertices).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            if parts[i] == parts[j] {
                continue;
            }
            match cells[i * n + j] {
                1 => g.add_edge(i, j).unwrap(),
                2 => g.add_edge(j, i).unwrap(),
                _ => {}
            }
        }
    }
    g
}

/// Any oriented bipartite graph with `1..=max_n` vertices, PU or not.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0u8..2, n),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(0u8..3, n * n),
            )
        })
        .prop_map(|(p, s, c)| build(&p, &s, &c))
}

/// Random PU graph with `2..=max_n` vertices.
pub fn arb_pu_graph(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    (2..=max_n, any::<u64>()).prop_map(|(n, seed)| random_pu_graph(n, 0.5, seed).unwrap())
}

/// The `i`-th graph of a deterministic random PU corpus with sizes cycling through `2..=max_n`.
pub fn corpus_graph(i: usize, max_n: usize, seed: u64) -> LabeledGraph {
    let n = 2 + i % (max_n - 1);
    random_pu_graph(n, 0.5, seed.wrapping_mul(7919).wrapping_add(i as u64)).unwrap()
}

/// Leibniz expansion; only for small matrices.
pub fn leibniz(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i64;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, m: &[Vec<i64>], total: &mut i64) {
    let n = p.len();
    if k == n {
        let mut inversions = 0;
        for a in 0..n {
            for b in a + 1..n {
                if p[a] > p[b] {
                    inversions += 1;
                }
            }
        }
        let prod: i64 = (0..n).map(|r| m[r][p[r]]).product();
        *total += if inversions % 2 == 0 { prod } else { -prod };
        return;
    }
    for i in k..n {
        p.swap(k, i);
        permute(p, k + 1, m, total);
        p.swap(k, i);
    }
}

/// The graph with every edge at the vertices of `alpha` reversed.
pub fn reverse_set(g: &LabeledGraph, alpha: State) -> LabeledGraph {
    alpha.iter().fold(g.clone(), |h, v| glkh::moves::apply_r(&h, g.name(v)).unwrap())
}
