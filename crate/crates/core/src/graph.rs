//! Labeled oriented bipartite graphs, states, and the line-based graph file format.
//!
//! Vertex order is file order and defines every matrix index used elsewhere in
//! the crate. Adjacency is stored as a dense skew-symmetric `{0, ±1}` matrix:
//! entry `(i, j)` is `1` iff `v_i -> v_j`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::{self, IntMatrix};

/// Hard limit imposed by the bit-indexed [`State`] representation.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateName(String),
    #[error("self loop at `{0}`")]
    SelfLoop(String),
    #[error("edge `{0}`-`{1}` joins vertices of the same part")]
    SamePartEdge(String, String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("too many vertices ({0}, limit {MAX_VERTICES})")]
    TooManyVertices(usize),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
}

impl GraphError {
    /// The underlying error with any line annotation stripped.
    pub fn kind(&self) -> &GraphError {
        match self {
            GraphError::AtLine { source, .. } => source.kind(),
            other => other,
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            GraphError::AtLine { line, .. } => Some(*line),
            _ => None,
        }
    }

    fn at(self, line: usize) -> Self {
        GraphError::AtLine { line, source: Box::new(self) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl FromStr for Sign {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(GraphError::Syntax(format!("expected sign `+` or `-`, found `{s}`"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub name: String,
    /// Bipartition side, 0 or 1.
    pub part: u8,
    pub sign: Sign,
}

impl Vertex {
    pub fn new(name: impl Into<String>, part: u8, sign: Sign) -> Self {
        Vertex { name: name.into(), part, sign }
    }

    /// Part 0 with sign `-`, or part 1 with sign `+`.
    pub fn is_inner(&self) -> bool {
        matches!((self.part, self.sign), (0, Sign::Minus) | (1, Sign::Plus))
    }
}

/// A vertex subset, one bit per vertex index.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(u64);

impl State {
    pub const fn empty() -> Self {
        State(0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        State(bits)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            State(u64::MAX)
        } else {
            State((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        State(it.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        State(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        State(self.0 & !(1 << i))
    }

    /// `s ⊕ i`.
    pub fn toggle(self, i: usize) -> Self {
        State(self.0 ^ 1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn is_subset(self, other: State) -> bool {
        self.0 & !other.0 == 0
    }
}

/// Graph-link diagram: labeled vertices with a skew-symmetric adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    vertices: Vec<Vertex>,
    adj: Vec<i8>,
}

impl Default for LabeledGraph {
    fn default() -> Self {
        LabeledGraph::empty()
    }
}

impl LabeledGraph {
    pub fn empty() -> Self {
        LabeledGraph { vertices: Vec::new(), adj: Vec::new() }
    }

    /// Edgeless graph on the given vertices.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        if vertices.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(vertices.len()));
        }
        let mut seen = HashMap::new();
        for v in &vertices {
            if v.part > 1 {
                return Err(GraphError::Syntax(format!("part of `{}` must be 0 or 1", v.name)));
            }
            if seen.insert(v.name.as_str(), ()).is_some() {
                return Err(GraphError::DuplicateName(v.name.clone()));
            }
        }
        let n = vertices.len();
        Ok(LabeledGraph { vertices, adj: vec![0; n * n] })
    }

    /// Builds a graph from vertices and directed `(src, dst)` index pairs.
    pub fn with_edges(vertices: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = LabeledGraph::new(vertices)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vertices[i].name
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.vertices[i].sign
    }

    pub fn part(&self, i: usize) -> u8 {
        self.vertices[i].part
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn index(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name).ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Adjacency entry `a_ij`.
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.adj[i * self.n() + j]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.entry(i, j) != 0
    }

    /// Row `i` of the adjacency matrix.
    pub fn row(&self, i: usize) -> &[i8] {
        let n = self.n();
        &self.adj[i * n..(i + 1) * n]
    }

    /// Adds the directed edge `src -> dst`, validating the graph invariants.
    pub fn add_edge(&mut self, src: usize, dst: usize) -> Result<(), GraphError> {
        let (a, b) = (&self.vertices[src], &self.vertices[dst]);
        if src == dst {
            return Err(GraphError::SelfLoop(a.name.clone()));
        }
        if a.part == b.part {
            return Err(GraphError::SamePartEdge(a.name.clone(), b.name.clone()));
        }
        if self.adjacent(src, dst) {
            return Err(GraphError::DuplicateEdge(a.name.clone(), b.name.clone()));
        }
        self.set_entry(src, dst, 1);
        Ok(())
    }

    /// Sets `a_ij = value` and `a_ji = -value` without validation.
    pub(crate) fn set_entry(&mut self, i: usize, j: usize, value: i8) {
        let n = self.n();
        self.adj[i * n + j] = value;
        self.adj[j * n + i] = -value;
    }

    pub(crate) fn set_sign(&mut self, i: usize, sign: Sign) {
        self.vertices[i].sign = sign;
    }

    pub(crate) fn set_part(&mut self, i: usize, part: u8) {
        self.vertices[i].part = part;
    }

    /// Appends an isolated vertex and returns its index.
    pub(crate) fn push_vertex(&mut self, v: Vertex) -> Result<usize, GraphError> {
        if self.index_of(&v.name).is_some() {
            return Err(GraphError::DuplicateName(v.name));
        }
        let n = self.n();
        if n + 1 > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n + 1));
        }
        let mut adj = vec![0i8; (n + 1) * (n + 1)];
        for i in 0..n {
            adj[i * (n + 1)..i * (n + 1) + n].copy_from_slice(self.row(i));
        }
        self.adj = adj;
        self.vertices.push(v);
        Ok(n)
    }

    /// Removes the given vertices, keeping the relative order of the rest.
    pub(crate) fn remove_vertices(&self, drop: State) -> LabeledGraph {
        let keep: Vec<usize> = (0..self.n()).filter(|&i| !drop.contains(i)).collect();
        let m = keep.len();
        let mut adj = vec![0i8; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                adj[a * m + b] = self.entry(i, j);
            }
        }
        LabeledGraph {
            vertices: keep.iter().map(|&i| self.vertices[i].clone()).collect(),
            adj,
        }
    }

    /// Directed edges `(src, dst)` in index order of `(src, dst)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.entry(i, j) == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&x| x == 1).count()
    }

    /// `A(G)` as an exact integer matrix.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        self.induced_matrix(State::full(self.n()))
    }

    /// `A(s)`: principal submatrix on the state, in index order.
    pub fn induced_matrix(&self, s: State) -> IntMatrix {
        let idx: Vec<usize> = s.iter().filter(|&i| i < self.n()).collect();
        IntMatrix::from_fn(idx.len(), idx.len(), |a, b| i64::from(self.entry(idx[a], idx[b])))
    }

    /// `B(s)`: rows `s ∩ V_0`, columns `s ∩ V_1`.
    pub fn bipartite_block(&self, s: State) -> IntMatrix {
        let (rows, cols) = self.split_parts(s);
        IntMatrix::from_fn(rows.len(), cols.len(), |a, b| i64::from(self.entry(rows[a], cols[b])))
    }

    /// Indices of `s ∩ V_0` and `s ∩ V_1`.
    pub fn split_parts(&self, s: State) -> (Vec<usize>, Vec<usize>) {
        s.iter().filter(|&i| i < self.n()).partition(|&i| self.part(i) == 0)
    }

    /// `|s| - rank A(s)`.
    pub fn corank(&self, s: State) -> usize {
        let m = self.induced_matrix(s);
        m.rows() - linalg::rank(&m)
    }

    /// Neighbors of `v` in index order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.adjacent(u, v)).collect()
    }

    pub fn neighborhood(&self, name: &str) -> Result<Vec<usize>, GraphError> {
        Ok(self.neighbors(self.index(name)?))
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.row(v).iter().all(|&x| x == 0)
    }

    /// The state containing exactly the positive vertices: the unique source of the cube.
    pub fn initial_state(&self) -> State {
        State::from_indices((0..self.n()).filter(|&i| self.sign(i) == Sign::Plus))
    }

    /// Homological grading: arrows from the initial corner to `s`.
    pub fn grading_i(&self, s: State) -> i64 {
        (0..self.n())
            .filter(|&v| match self.sign(v) {
                Sign::Minus => s.contains(v),
                Sign::Plus => !s.contains(v),
            })
            .count() as i64
    }

    /// Whether the cube arrow along coordinate `i` leaves `s`.
    pub fn is_arrow_source(&self, s: State, i: usize) -> bool {
        match self.sign(i) {
            Sign::Minus => !s.contains(i),
            Sign::Plus => s.contains(i),
        }
    }

    /// `{u,v}` style rendering of a state using vertex names.
    pub fn format_state(&self, s: State) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The induced subgraph on `s`.
    pub fn subgraph(&self, s: State) -> LabeledGraph {
        self.remove_vertices(State::from_bits(!s.bits() & State::full(self.n()).bits()))
    }

    /// Forgets edge directions.
    pub fn underlying(&self) -> UnorientedGraph {
        UnorientedGraph {
            vertices: self.vertices.clone(),
            edges: self.edges().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect::<std::collections::BTreeSet<_>>().into_iter().collect(),
        }
    }

    /// Parses the graph file format. Only directed `edge` lines are accepted.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let file = GraphFile::parse(text)?;
        if let Some(&(line, _, _)) = file.undirected.first() {
            return Err(GraphError::Syntax("undirected `uedge` needs an orientation (see `orient`)".into()).at(line));
        }
        let mut g = LabeledGraph::new(file.vertices).map_err(|e| e.at(0))?;
        for (line, a, b) in file.directed {
            g.add_edge(a, b).map_err(|e| e.at(line))?;
        }
        Ok(g)
    }

    /// Canonical serialization: vertices in index order, edges in `(src, dst)` order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {} {} {}\n", v.name, v.part, v.sign));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("edge {} {}\n", self.name(a), self.name(b)));
        }
        out
    }
}

impl FromStr for LabeledGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LabeledGraph::parse(s)
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Labeled bipartite graph without edge directions; input to the orientation search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnorientedGraph {
    pub vertices: Vec<Vertex>,
    /// Normalized `(min, max)` index pairs, sorted, without duplicates.
    pub edges: Vec<(usize, usize)>,
}

impl UnorientedGraph {
    pub fn new(vertices: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        LabeledGraph::new(vertices.clone())?;
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(vertices[a].name.clone()));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(vertices[w[0].0].name.clone(), vertices[w[0].1].name.clone()));
        }
        Ok(UnorientedGraph { vertices, edges: norm })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Parses a graph file where `edge` and `uedge` lines are both read as undirected.
    /// Same-part edges are not rejected here.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let file = GraphFile::parse(text)?;
        let mut edges: Vec<(usize, usize, usize)> = file.directed;
        edges.extend(file.undirected);
        edges.sort_by_key(|e| e.0);
        let names: Vec<String> = file.vertices.iter().map(|v| v.name.clone()).collect();
        LabeledGraph::new(file.vertices.clone()).map_err(|e| e.at(0))?;
        let mut seen = std::collections::BTreeSet::new();
        for &(line, a, b) in &edges {
            if a == b {
                return Err(GraphError::SelfLoop(names[a].clone()).at(line));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::DuplicateEdge(names[a].clone(), names[b].clone()).at(line));
            }
        }
        Ok(UnorientedGraph { vertices: file.vertices, edges: seen.into_iter().collect() })
    }
}

/// Raw parsed contents of a graph file, before invariant checks on edges.
struct GraphFile {
    vertices: Vec<Vertex>,
    directed: Vec<(usize, usize, usize)>,
    undirected: Vec<(usize, usize, usize)>,
}

impl GraphFile {
    fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertices: Vec<Vertex> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut directed = Vec::new();
        let mut undirected = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let Some(&head) = tokens.first() else { continue };
            match head {
                "vertex" => {
                    let [_, name, part, sign] = tokens[..] else {
                        return Err(GraphError::Syntax("expected `vertex <name> <0|1> <+|->`".into()).at(line));
                    };
                    let part = match part {
                        "0" => 0,
                        "1" => 1,
                        _ => return Err(GraphError::Syntax(format!("part must be 0 or 1, found `{part}`")).at(line)),
                    };
                    let sign: Sign = sign.parse().map_err(|e: GraphError| e.at(line))?;
                    if !is_identifier(name) {
                        return Err(GraphError::Syntax(format!("invalid vertex name `{name}`")).at(line));
                    }
                    if index.contains_key(name) {
                        return Err(GraphError::DuplicateName(name.to_string()).at(line));
                    }
                    if vertices.len() == MAX_VERTICES {
                        return Err(GraphError::TooManyVertices(MAX_VERTICES + 1).at(line));
                    }
                    index.insert(name.to_string(), vertices.len());
                    vertices.push(Vertex::new(name, part, sign));
                }
                "edge" | "uedge" => {
                    let [_, a, b] = tokens[..] else {
                        return Err(GraphError::Syntax(format!("expected `{head} <src> <dst>`")).at(line));
                    };
                    let lookup = |name: &str| {
                        index.get(name).copied().ok_or_else(|| GraphError::UnknownVertex(name.to_string()).at(line))
                    };
                    let (a, b) = (lookup(a)?, lookup(b)?);
                    if head == "edge" {
                        directed.push((line, a, b));
                    } else {
                        undirected.push((line, a, b));
                    }
                }
                other => return Err(GraphError::Syntax(format!("unknown directive `{other}`")).at(line)),
            }
        }
        Ok(GraphFile { vertices, directed, undirected })
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'))
        && !matches!(name, "+" | "-")
}
