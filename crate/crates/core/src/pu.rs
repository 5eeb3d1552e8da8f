//! Principal unimodularity: verification, chordless-cycle parity, orientation
//! search and comparison, and random PU instances.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{LabeledGraph, Sign, State, UnorientedGraph, Vertex};
use crate::linalg::{self, minors_all};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuError {
    #[error("edge `{0}`-`{1}` joins vertices of the same part")]
    NotBipartite(String, String),
    #[error("graphs differ in structure: {0}")]
    StructureMismatch(String),
    #[error("no PU graph found after {0} attempts")]
    GiveUp(usize),
}

/// Which equivalent criterion `is_pu` checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum PuMethod {
    /// Every minor of `B(G)` lies in `{0, ±1}`.
    #[default]
    MinorsB,
    /// Every minor of `A(G)` lies in `{0, ±1}`.
    MinorsA,
    /// Every principal minor `det A(s)` lies in `{0, 1}`.
    StateDets,
}

impl PuMethod {
    pub const ALL: [PuMethod; 3] = [PuMethod::MinorsB, PuMethod::MinorsA, PuMethod::StateDets];

    pub fn as_str(self) -> &'static str {
        match self {
            PuMethod::MinorsB => "minors-b",
            PuMethod::MinorsA => "minors-a",
            PuMethod::StateDets => "state-dets",
        }
    }
}

impl FromStr for PuMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PuMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected minors-b, minors-a or state-dets)"))
    }
}

impl fmt::Display for PuMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence that an orientation is not principally unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// A state with `det A(s) ∉ {0, 1}`.
    StateDet { state: State, det: BigInt },
    /// A minor of `B(G)`; rows are part-0 vertices, columns part-1 vertices.
    BMinor { rows: Vec<usize>, cols: Vec<usize>, value: BigInt },
    /// A minor of `A(G)` on arbitrary row and column vertex sets.
    AMinor { rows: Vec<usize>, cols: Vec<usize>, value: BigInt },
}

impl Counterexample {
    /// A violating state with its determinant, when one follows directly from the witness.
    /// A `B` minor `m` on rows `R` and columns `C` gives `det A(R ∪ C) = m²`.
    pub fn state_witness(&self) -> Option<(State, BigInt)> {
        match self {
            Counterexample::StateDet { state, det } => Some((*state, det.clone())),
            Counterexample::BMinor { rows, cols, value } => {
                Some((State::from_indices(rows.iter().chain(cols).copied()), value * value))
            }
            Counterexample::AMinor { rows, cols, value } if rows == cols => {
                Some((State::from_indices(rows.iter().copied()), value.clone()))
            }
            Counterexample::AMinor { .. } => None,
        }
    }

    pub fn describe(&self, g: &LabeledGraph) -> String {
        let names = |ix: &[usize]| g.format_state(State::from_indices(ix.iter().copied()));
        let head = match self {
            Counterexample::StateDet { .. } => String::new(),
            Counterexample::BMinor { rows, cols, value } => {
                format!("minor of B equals {value} on rows {} and columns {}; ", names(rows), names(cols))
            }
            Counterexample::AMinor { rows, cols, value } => {
                format!("minor of A equals {value} on rows {} and columns {}; ", names(rows), names(cols))
            }
        };
        match self.state_witness() {
            Some((s, d)) => format!("{head}det={d} at state {}", g.format_state(s)),
            None => head.trim_end_matches("; ").to_string(),
        }
    }
}

fn unimodular_value(x: &BigInt) -> bool {
    x.abs() <= BigInt::one()
}

/// Checks principal unimodularity with the chosen criterion. Labels are ignored.
pub fn is_pu(g: &LabeledGraph, method: PuMethod) -> Result<(), Counterexample> {
    match method {
        PuMethod::MinorsB => {
            let (rows, cols) = g.split_parts(State::full(g.n()));
            match minors_all(&g.bipartite_block(State::full(g.n())), unimodular_value) {
                None => Ok(()),
                Some(w) => Err(Counterexample::BMinor {
                    rows: w.rows.iter().map(|&r| rows[r]).collect(),
                    cols: w.cols.iter().map(|&c| cols[c]).collect(),
                    value: w.value,
                }),
            }
        }
        PuMethod::MinorsA => match minors_all(&g.adjacency_matrix(), unimodular_value) {
            None => Ok(()),
            Some(w) => Err(Counterexample::AMinor { rows: w.rows, cols: w.cols, value: w.value }),
        },
        PuMethod::StateDets => {
            let n = g.n();
            assert!(n < 40, "state enumeration over {n} vertices is infeasible");
            let hit = (0..1u64 << n).into_par_iter().find_map_first(|bits| {
                let s = State::from_bits(bits);
                if s.len() % 2 == 1 {
                    return None;
                }
                let d = linalg::det(&g.induced_matrix(s)).expect("square");
                (!(d.is_zero() || d.is_one())).then_some(Counterexample::StateDet { state: s, det: d })
            });
            hit.map_or(Ok(()), Err)
        }
    }
}

fn adjacency_lists(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    adj
}

/// Induced cycles of length at least 4 of the graph with the given adjacency lists.
/// Each cycle starts at its smallest vertex and its second vertex is smaller than
/// its last, so every cycle appears exactly once.
pub fn chordless_cycles_of(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut is_adj = vec![false; n * n];
    for (a, l) in adj.iter().enumerate() {
        for &b in l {
            is_adj[a * n + b] = true;
        }
    }
    let mut out = Vec::new();
    for v0 in 0..n {
        let mut path = vec![v0];
        extend_path(adj, &is_adj, &mut path, &mut out);
    }
    out
}

fn extend_path(adj: &[Vec<usize>], is_adj: &[bool], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let n = adj.len();
    let v0 = path[0];
    let last = *path.last().unwrap();
    for &x in &adj[last] {
        if x <= v0 || path.contains(&x) {
            continue;
        }
        // x may touch only `last` among the interior of the path
        if path.len() > 1 && path[1..path.len() - 1].iter().any(|&p| is_adj[p * n + x]) {
            continue;
        }
        if path.len() > 1 && is_adj[v0 * n + x] {
            if path.len() >= 3 && path[1] < x {
                let mut c = path.clone();
                c.push(x);
                out.push(c);
            }
            continue;
        }
        path.push(x);
        extend_path(adj, is_adj, path, out);
        path.pop();
    }
}

/// Chordless cycles of the underlying graph of `g`, in enumeration order.
pub fn chordless_cycles(g: &LabeledGraph) -> Vec<Vec<usize>> {
    chordless_cycles_of(&adjacency_lists(g.n(), &g.underlying().edges))
}

/// Number of edges oriented along the traversal `c[0] -> c[1] -> … -> c[0]`.
pub fn codirectional_count(g: &LabeledGraph, cycle: &[usize]) -> usize {
    (0..cycle.len()).filter(|&k| g.entry(cycle[k], cycle[(k + 1) % cycle.len()]) == 1).count()
}

/// First chordless cycle with an odd number of codirectional edges, if any.
pub fn all_chordless_even(g: &LabeledGraph) -> Result<(), Vec<usize>> {
    match chordless_cycles(g).into_iter().find(|c| codirectional_count(g, c) % 2 == 1) {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

/// Orients the edges of `u` so that the result is PU, or returns `None`.
///
/// A spanning forest is oriented from part 0 to part 1; the remaining edges are
/// branched on, pruning every branch that completes an odd chordless cycle.
/// Surviving candidates are certified with [`is_pu`].
pub fn find_pu_orientation(u: &UnorientedGraph) -> Result<Option<LabeledGraph>, PuError> {
    let n = u.n();
    for &(a, b) in &u.edges {
        if u.vertices[a].part == u.vertices[b].part {
            return Err(PuError::NotBipartite(u.vertices[a].name.clone(), u.vertices[b].name.clone()));
        }
    }
    let adj = adjacency_lists(n, &u.edges);
    let cycles = chordless_cycles_of(&adj);
    let edge_index = |a: usize, b: usize| u.edges.binary_search(&(a.min(b), a.max(b))).expect("edge");

    // spanning forest by BFS from the smallest vertex of each component
    let mut in_tree = vec![false; u.edges.len()];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    in_tree[edge_index(x, y)] = true;
                    queue.push_back(y);
                }
            }
        }
    }

    // orientation bit per edge: false = part 0 -> part 1
    let free: Vec<usize> = (0..u.edges.len()).filter(|&e| !in_tree[e]).collect();
    let mut position = vec![0usize; u.edges.len()];
    for (k, &e) in free.iter().enumerate() {
        position[e] = k + 1;
    }
    // cycles grouped by the branching depth at which their last edge gets fixed
    let mut due: Vec<Vec<Vec<usize>>> = vec![Vec::new(); free.len() + 1];
    for c in &cycles {
        let es: Vec<usize> = (0..c.len()).map(|k| edge_index(c[k], c[(k + 1) % c.len()])).collect();
        let depth = es.iter().map(|&e| position[e]).max().unwrap_or(0);
        due[depth].push(c.clone());
    }
    let mut flipped = vec![false; u.edges.len()];
    let build = |flipped: &[bool]| -> LabeledGraph {
        let mut g = LabeledGraph::new(u.vertices.clone()).expect("vertices already validated");
        for (e, &(a, b)) in u.edges.iter().enumerate() {
            let (p0, p1) = if u.vertices[a].part == 0 { (a, b) } else { (b, a) };
            let (src, dst) = if flipped[e] { (p1, p0) } else { (p0, p1) };
            g.add_edge(src, dst).expect("bipartite simple edge");
        }
        g
    };
    let parity_ok = |flipped: &[bool], cycles: &[Vec<usize>]| {
        cycles.iter().all(|c| {
            let codir = (0..c.len())
                .filter(|&k| {
                    let (a, b) = (c[k], c[(k + 1) % c.len()]);
                    let forward = u.vertices[a].part == 0;
                    forward != flipped[edge_index(a, b)]
                })
                .count();
            codir % 2 == 0
        })
    };
    if !parity_ok(&flipped, &due[0]) {
        return Ok(None);
    }
    Ok(search(0, &free, &due, &mut flipped, &parity_ok, &build))
}

/// Whether every given cycle has an even number of codirected edges under the current flips.
type ParityCheck<'a> = dyn Fn(&[bool], &[Vec<usize>]) -> bool + 'a;

fn search(
    k: usize,
    free: &[usize],
    due: &[Vec<Vec<usize>>],
    flipped: &mut Vec<bool>,
    parity_ok: &ParityCheck,
    build: &dyn Fn(&[bool]) -> LabeledGraph,
) -> Option<LabeledGraph> {
    if k == free.len() {
        let g = build(flipped);
        return is_pu(&g, PuMethod::MinorsB).is_ok().then_some(g);
    }
    for choice in [false, true] {
        flipped[free[k]] = choice;
        if parity_ok(flipped, &due[k + 1]) {
            if let Some(g) = search(k + 1, free, due, flipped, parity_ok, build) {
                return Some(g);
            }
        }
    }
    flipped[free[k]] = false;
    None
}

/// A vertex set `α` such that reversing every vertex of `α` turns `g1` into `g2`.
///
/// Per connected component the smallest vertex is kept out of `α` and membership
/// propagates along edges; this is the lexicographically smallest choice.
pub fn compare_orientations(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<Option<State>, PuError> {
    if g1.vertices() != g2.vertices() {
        return Err(PuError::StructureMismatch("vertex lists differ".into()));
    }
    let n = g1.n();
    for i in 0..n {
        for j in 0..n {
            if g1.adjacent(i, j) != g2.adjacent(i, j) {
                return Err(PuError::StructureMismatch(format!(
                    "adjacency of `{}` and `{}` differs",
                    g1.name(i),
                    g1.name(j)
                )));
            }
        }
    }
    let mut alpha: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if alpha[root].is_some() {
            continue;
        }
        alpha[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for y in g1.neighbors(x) {
                if alpha[y].is_none() {
                    alpha[y] = Some(alpha[x].unwrap() ^ (g1.entry(x, y) != g2.entry(x, y)));
                    queue.push_back(y);
                }
            }
        }
    }
    let alpha = State::from_indices((0..n).filter(|&i| alpha[i] == Some(true)));
    let consistent = g1.edges().into_iter().all(|(x, y)| {
        let flips = alpha.contains(x) != alpha.contains(y);
        (g1.entry(x, y) == g2.entry(x, y)) != flips
    });
    Ok(consistent.then_some(alpha))
}

/// Attempts made by [`random_pu_graph`] before giving up.
pub const RANDOM_ATTEMPTS: usize = 1000;

/// A random PU graph on `n` vertices named `v0, v1, …`, deterministic in `seed`.
///
/// Parts are sampled with both sides nonempty (for `n ≥ 2`), cross edges appear
/// with probability `density`, the result is oriented by [`find_pu_orientation`],
/// then reversed at a random vertex subset; signs are uniform.
pub fn random_pu_graph(n: usize, density: f64, seed: u64) -> Result<LabeledGraph, PuError> {
    random_pu_graph_with(n, density, seed, RANDOM_ATTEMPTS)
}

pub fn random_pu_graph_with(n: usize, density: f64, seed: u64, attempts: usize) -> Result<LabeledGraph, PuError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let mut parts: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        if n >= 2 && parts.iter().all(|&p| p == parts[0]) {
            let k = rng.gen_range(0..n);
            parts[k] ^= 1;
        }
        let vertices: Vec<Vertex> = (0..n)
            .map(|i| Vertex::new(format!("v{i}"), parts[i], *[Sign::Plus, Sign::Minus].choose(&mut rng).unwrap()))
            .collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if parts[a] != parts[b] && rng.gen_bool(density.clamp(0.0, 1.0)) {
                    edges.push((a, b));
                }
            }
        }
        let u = UnorientedGraph::new(vertices, &edges).expect("generated graph is simple");
        if let Some(mut g) = find_pu_orientation(&u)? {
            for v in 0..n {
                if rng.gen_bool(0.5) {
                    g = reverse_at(&g, v);
                }
            }
            return Ok(g);
        }
    }
    Err(PuError::GiveUp(attempts))
}

/// Reverses every edge at `v` (the move `R`).
pub(crate) fn reverse_at(g: &LabeledGraph, v: usize) -> LabeledGraph {
    let mut h = g.clone();
    for u in 0..g.n() {
        let a = g.entry(v, u);
        if a != 0 {
            h.set_entry(v, u, -a);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, graph};

    #[test]
    fn odd4_fails_every_method() {
        let g = graph(fixtures::ODD4);
        for m in PuMethod::ALL {
            let c = is_pu(&g, m).unwrap_err();
            if m != PuMethod::MinorsA {
                assert_eq!(c.state_witness(), Some((State::full(4), BigInt::from(4))), "{m}");
            }
        }
        let c = is_pu(&g, PuMethod::MinorsB).unwrap_err();
        assert_eq!(c.describe(&g), "minor of B equals 2 on rows {u,t} and columns {v,w}; det=4 at state {u,v,w,t}");
    }

    #[test]
    fn pu_fixtures_pass_every_method() {
        for name in ["E1", "EVEN4", "OM3", "THETA11", "UNKNOT_NEG"] {
            let g = fixtures::by_name(name).unwrap();
            for m in PuMethod::ALL {
                assert_eq!(is_pu(&g, m), Ok(()), "{name} {m}");
            }
        }
    }

    #[test]
    fn chordless_parity() {
        let g = graph(fixtures::ODD4);
        assert_eq!(all_chordless_even(&g), Err(vec![0, 1, 3, 2]));
        assert_eq!(all_chordless_even(&graph(fixtures::EVEN4)), Ok(()));
        let theta = graph(fixtures::THETA11);
        let cycles = chordless_cycles(&theta);
        assert_eq!(cycles.len(), 3);
        for c in &cycles {
            assert_eq!(c.len(), 8);
            assert_eq!(codirectional_count(&theta, c), 4);
        }
    }

    #[test]
    fn chordless_cycles_of_k33() {
        // K_{3,3}: every chordless cycle is a 4-cycle, 9 of them
        let adj: Vec<Vec<usize>> = (0..6).map(|i| if i < 3 { vec![3, 4, 5] } else { vec![0, 1, 2] }).collect();
        let cycles = chordless_cycles_of(&adj);
        assert_eq!(cycles.len(), 9);
        assert!(cycles.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn orientation_of_four_cycles() {
        for text in [fixtures::EVEN4, fixtures::ODD4] {
            let u = graph(text).underlying();
            let g = find_pu_orientation(&u).unwrap().unwrap();
            assert_eq!(g.underlying(), u);
            assert_eq!(is_pu(&g, PuMethod::MinorsB), Ok(()));
            assert_eq!(all_chordless_even(&g), Ok(()));
        }
        let odd = graph(fixtures::ODD4);
        assert_ne!(find_pu_orientation(&odd.underlying()).unwrap().unwrap(), odd);
    }

    #[test]
    fn triangle_is_not_bipartite() {
        let u = UnorientedGraph::parse("vertex a 0 -\nvertex b 1 -\nvertex c 0 -\nuedge a b\nuedge b c\nuedge c a\n").unwrap();
        assert_eq!(find_pu_orientation(&u), Err(PuError::NotBipartite("a".into(), "c".into())));
    }

    #[test]
    fn compare_reversal() {
        let g = graph(fixtures::EVEN4);
        assert_eq!(compare_orientations(&g, &g), Ok(Some(State::empty())));
        let h = reverse_at(&g, 0);
        let alpha = compare_orientations(&g, &h).unwrap().unwrap();
        // smallest vertex kept fixed: the complement of {u1}
        assert_eq!(alpha, State::from_indices([1, 2, 3]));
        let other = find_pu_orientation(&g.underlying()).unwrap().unwrap();
        assert!(compare_orientations(&g, &other).unwrap().is_some());
        let odd = graph(fixtures::ODD4);
        let even = find_pu_orientation(&odd.underlying()).unwrap().unwrap();
        assert_eq!(compare_orientations(&odd, &even), Ok(None));
        assert!(matches!(compare_orientations(&g, &odd), Err(PuError::StructureMismatch(_))));
    }

    #[test]
    fn random_graphs() {
        let g = random_pu_graph(2, 1.0, 5).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(random_pu_graph(0, 0.5, 1).unwrap().n(), 0);
        let a = random_pu_graph(8, 0.3, 42).unwrap();
        assert_eq!(a, random_pu_graph(8, 0.3, 42).unwrap());
        assert_eq!(is_pu(&a, PuMethod::StateDets), Ok(()));
    }
}
