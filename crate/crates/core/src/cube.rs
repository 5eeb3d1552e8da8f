//! The hypercube of states: free modules `V(s)`, cube edges and their maps,
//! 2-face classification and edge assignments.
//!
//! Internally states are addressed in coordinates relative to the initial corner
//! (`y = s XOR initial`), so every cube arrow sets a bit of `y`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{LabeledGraph, State};
use crate::linalg::{self, gf2_solve, quotient_projection, wedge_expand, ExteriorElement, IntMatrix, LinalgError};

/// Largest graph for which the full cube is built.
pub const MAX_CUBE_VERTICES: usize = 16;
/// Graphs above this size are accepted but slow.
pub const WARN_CUBE_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("graph has {0} vertices; the state cube is limited to {MAX_CUBE_VERTICES}")]
    SizeBound(usize),
    #[error("V({state}) has torsion (invariant factor {factor}); the graph is not PU")]
    Torsion { state: String, factor: BigInt },
    #[error("corank lemma violated at state {state}, coordinate {coordinate}")]
    LemmaViolation { state: String, coordinate: String },
    #[error("({state}; {i}, {j}) is not a face with both arrows leaving {state}")]
    NotAFace { state: String, i: String, j: String },
    #[error("face ({state}; {i}, {j}) composites disagree with class {class}")]
    CompositeMismatch { state: String, i: String, j: String, class: FaceClass },
    #[error("no type {kind} edge assignment under the {convention} convention (face {face})")]
    Infeasible { kind: AssignmentKind, convention: Convention, face: String },
    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl From<LinalgError> for CubeError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Overflow => CubeError::Overflow,
            other => CubeError::Internal(other.to_string()),
        }
    }
}

/// Fails with `SizeBound` above [`MAX_CUBE_VERTICES`].
pub fn check_size(g: &LabeledGraph) -> Result<(), CubeError> {
    if g.n() > MAX_CUBE_VERTICES {
        Err(CubeError::SizeBound(g.n()))
    } else {
        Ok(())
    }
}

/// The free module `V(s)` presented by `π: Z^n -> Z^k` and a section `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateModule {
    pub state: State,
    pub rank: usize,
    n: usize,
    /// `rank x n`, row-major; column `j` is the class of `x_j`.
    projection: Vec<i64>,
    /// `n x rank`, row-major.
    section: Vec<i64>,
}

impl StateModule {
    /// Coordinates of `x_j` in `V(s)`.
    pub fn class_of(&self, j: usize) -> Vec<i64> {
        (0..self.rank).map(|a| self.projection[a * self.n + j]).collect()
    }

    pub fn is_zero(&self, j: usize) -> bool {
        (0..self.rank).all(|a| self.projection[a * self.n + j] == 0)
    }

    pub fn projection(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rank, self.n, |a, j| self.projection[a * self.n + j])
    }

    pub fn section(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.rank, |j, a| self.section[j * self.rank + a])
    }
}

/// Relation matrix of `V(s)`: row `i` is `e_i [v_i ∉ s] + Σ_{j ∈ s} ā_ij e_j`
/// with `ā_ij = -sgn(v_j) a_ij`.
pub fn relation_matrix(g: &LabeledGraph, s: State) -> IntMatrix {
    IntMatrix::from_fn(g.n(), g.n(), |i, j| {
        let diag = i64::from(i == j && !s.contains(i));
        let rel = if s.contains(j) { -g.sign(j).value() * i64::from(g.entry(i, j)) } else { 0 };
        diag + rel
    })
}

fn to_small(m: &IntMatrix) -> Result<Vec<i64>, CubeError> {
    m.to_i64().ok_or(CubeError::Overflow)
}

pub fn state_module(g: &LabeledGraph, s: State) -> Result<StateModule, CubeError> {
    let q = quotient_projection(&relation_matrix(g, s)).map_err(|e| match e {
        LinalgError::TorsionDetected(factor) => CubeError::Torsion { state: g.format_state(s), factor },
        other => other.into(),
    })?;
    Ok(StateModule {
        state: s,
        rank: q.rank,
        n: g.n(),
        projection: to_small(&q.projection)?,
        section: to_small(&q.section)?,
    })
}

/// Whether `x_i = 0` in `V(s)`, computed from the projection and cross-checked
/// against `cor A(s ⊕ i) = cor A(s) + 1`.
pub fn xi_zero(g: &LabeledGraph, s: State, i: usize) -> Result<bool, CubeError> {
    let zero = state_module(g, s)?.is_zero(i);
    let by_corank = g.corank(s.toggle(i)) == g.corank(s) + 1;
    if zero != by_corank {
        return Err(CubeError::LemmaViolation { state: g.format_state(s), coordinate: g.name(i).to_string() });
    }
    Ok(zero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `u ↦ x_i ∧ u`; rank goes up by one.
    Wedge,
    /// `u ↦ u`; rank goes down by one.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeEdge {
    pub source: State,
    pub target: State,
    pub coordinate: usize,
    pub kind: EdgeKind,
}

/// The map `Λ*V(source) -> Λ*V(target)` of a cube edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    pub kind: EdgeKind,
    pub source_rank: usize,
    pub target_rank: usize,
    /// `target_rank x source_rank`: images of the basis of `V(source)`.
    matrix: Vec<i64>,
    /// Class of `x_i` in `V(target)` for wedge edges.
    wedge: Option<Vec<i64>>,
}

impl EdgeMap {
    fn column(&self, a: usize) -> Vec<i64> {
        (0..self.target_rank).map(|b| self.matrix[b * self.source_rank + a]).collect()
    }

    /// Image of the basis monomial of `Λ*V(source)` with index set `mask`.
    pub fn apply(&self, mask: u32) -> Result<ExteriorElement, LinalgError> {
        let mut vectors: Vec<Vec<i64>> = Vec::with_capacity(mask.count_ones() as usize + 1);
        vectors.extend(self.wedge.iter().cloned());
        vectors.extend((0..self.source_rank).filter(|&a| mask >> a & 1 == 1).map(|a| self.column(a)));
        wedge_expand(self.target_rank, &vectors)
    }

    pub fn apply_element(&self, x: &ExteriorElement) -> Result<ExteriorElement, LinalgError> {
        let degree = x.degree() + usize::from(self.kind == EdgeKind::Wedge);
        let mut out = ExteriorElement::zero(self.target_rank, degree);
        for (mask, c) in x.terms() {
            out.add_scaled(&self.apply(mask)?, c)?;
        }
        Ok(out)
    }
}

/// Class of a 2-face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceClass {
    /// anticommutative
    A,
    /// commutative
    C,
    X,
    Y,
}

impl fmt::Display for FaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceType {
    /// Rank-pattern type 1..=5.
    pub raw: u8,
    pub class: FaceClass,
}

/// Rule assigning zero faces (rank pattern `0,1,1,0`) to X or Y. With `a` the
/// inner and `b` the outer coordinate vertex and `x_a = c x_b` in `V(s ⊕ a)`:
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Convention {
    /// X iff `c = 1`.
    Inner,
    /// X iff `c = sgn(v_b)`.
    #[default]
    Signed,
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inner" => Ok(Convention::Inner),
            "signed" => Ok(Convention::Signed),
            _ => Err(format!("unknown convention `{s}` (expected inner or signed)")),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Inner => "inner",
            Convention::Signed => "signed",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum AssignmentKind {
    #[default]
    X,
    Y,
}

impl AssignmentKind {
    /// Required number of `-1` edges mod 2 on a face of the given class.
    pub fn target_parity(self, class: FaceClass) -> bool {
        match (self, class) {
            (_, FaceClass::A) => false,
            (_, FaceClass::C) => true,
            (AssignmentKind::X, FaceClass::X) | (AssignmentKind::Y, FaceClass::Y) => false,
            (AssignmentKind::X, FaceClass::Y) | (AssignmentKind::Y, FaceClass::X) => true,
        }
    }
}

impl FromStr for AssignmentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" | "x" => Ok(AssignmentKind::X),
            "Y" | "y" => Ok(AssignmentKind::Y),
            _ => Err(format!("unknown assignment type `{s}` (expected X or Y)")),
        }
    }
}

impl fmt::Display for AssignmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Edge index of `(y, i)` with `y_i = 0`: `i · 2^(n-1) + (y without bit i)`.
pub fn edge_index(n: usize, y: u64, i: usize) -> usize {
    (i << (n - 1)) | remove_bit(y, i) as usize
}

/// Face index of `(y; i, j)`, `i < j`, `y_i = y_j = 0`.
pub fn face_index(n: usize, y: u64, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    let pair = i * (2 * n - i - 1) / 2 + (j - i - 1);
    (pair << (n - 2)) | remove_bit(remove_bit(y, j), i) as usize
}

fn remove_bit(y: u64, i: usize) -> u64 {
    (y & ((1 << i) - 1)) | ((y >> (i + 1)) << i)
}

fn insert_zero(y: u64, i: usize) -> u64 {
    (y & ((1 << i) - 1)) | ((y >> i) << (i + 1))
}

/// `c` with `b = c a` and `c = ±1`, if it exists.
fn unit_ratio(a: &[i64], b: &[i64]) -> Option<i64> {
    [1, -1].into_iter().find(|&c| a.iter().zip(b).all(|(&x, &y)| y == c * x))
}

/// The full cube of a graph with every state module computed once.
pub struct StateCube<'g> {
    g: &'g LabeledGraph,
    init: u64,
    modules: Vec<StateModule>,
    coranks: Vec<usize>,
    maps: OnceLock<Result<Vec<EdgeMap>, CubeError>>,
}

impl<'g> StateCube<'g> {
    /// Computes every `V(s)` in parallel and checks `rank V(s) = cor A(s)`.
    pub fn new(g: &'g LabeledGraph) -> Result<Self, CubeError> {
        check_size(g)?;
        let n = g.n();
        let states: Vec<u64> = (0..1u64 << n).collect();
        let modules: Vec<StateModule> =
            states.par_iter().map(|&b| state_module(g, State::from_bits(b))).collect::<Result<_, _>>()?;
        let coranks: Vec<usize> = states.par_iter().map(|&b| g.corank(State::from_bits(b))).collect();
        for (m, &c) in modules.iter().zip(&coranks) {
            if m.rank != c {
                return Err(CubeError::Internal(format!(
                    "rank V({}) = {} but cor A = {c}",
                    g.format_state(m.state),
                    m.rank
                )));
            }
        }
        let cube = StateCube { g, init: g.initial_state().bits(), modules, coranks, maps: OnceLock::new() };
        // the corank lemma, for every arrow
        for y in 0..1u64 << n {
            for i in (0..n).filter(|&i| y >> i & 1 == 0) {
                cube.xi_zero(cube.state(y), i)?;
            }
        }
        Ok(cube)
    }

    pub fn graph(&self) -> &LabeledGraph {
        self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// State at relative coordinates `y`.
    pub fn state(&self, y: u64) -> State {
        State::from_bits(y ^ self.init)
    }

    /// Relative coordinates of a state.
    pub fn coords(&self, s: State) -> u64 {
        s.bits() ^ self.init
    }

    pub fn module(&self, s: State) -> &StateModule {
        &self.modules[s.bits() as usize]
    }

    pub fn corank(&self, s: State) -> usize {
        self.coranks[s.bits() as usize]
    }

    /// `x_i = 0` in `V(s)`, cross-checked against the corank lemma.
    pub fn xi_zero(&self, s: State, i: usize) -> Result<bool, CubeError> {
        let zero = self.module(s).is_zero(i);
        if zero != (self.corank(s.toggle(i)) == self.corank(s) + 1) {
            return Err(CubeError::LemmaViolation {
                state: self.g.format_state(s),
                coordinate: self.g.name(i).to_string(),
            });
        }
        Ok(zero)
    }

    pub fn edge(&self, source: State, i: usize) -> CubeEdge {
        assert!(self.g.is_arrow_source(source, i), "no arrow leaves the state along {i}");
        let kind = if self.module(source).is_zero(i) { EdgeKind::Wedge } else { EdgeKind::Plain };
        CubeEdge { source, target: source.toggle(i), coordinate: i, kind }
    }

    /// All `n · 2^(n-1)` arrows in edge-index order.
    pub fn edges(&self) -> Vec<CubeEdge> {
        let n = self.n();
        if n == 0 {
            return Vec::new();
        }
        (0..n)
            .flat_map(|i| (0..1u64 << (n - 1)).map(move |r| (i, insert_zero(r, i))))
            .map(|(i, y)| self.edge(self.state(y), i))
            .collect()
    }

    /// The map of the arrow leaving `s` along `i`, computed once for all edges.
    pub fn cached_map(&self, s: State, i: usize) -> Result<&EdgeMap, CubeError> {
        let maps = self
            .maps
            .get_or_init(|| self.edges().par_iter().map(|e| self.edge_map(e)).collect())
            .as_ref()
            .map_err(Clone::clone)?;
        Ok(&maps[edge_index(self.n(), self.coords(s), i)])
    }

    /// The map of a cube edge, with the dichotomy of its kind verified.
    pub fn edge_map(&self, e: &CubeEdge) -> Result<EdgeMap, CubeError> {
        let (ms, mt) = (self.module(e.source), self.module(e.target));
        let (ks, kt, n) = (ms.rank, mt.rank, self.n());
        let mut matrix = vec![0i64; kt * ks];
        for b in 0..kt {
            for a in 0..ks {
                let mut acc: i64 = 0;
                for j in 0..n {
                    let t = mt.projection[b * n + j].checked_mul(ms.section[j * ks + a]).ok_or(CubeError::Overflow)?;
                    acc = acc.checked_add(t).ok_or(CubeError::Overflow)?;
                }
                matrix[b * ks + a] = acc;
            }
        }
        let m = IntMatrix::from_fn(kt, ks, |b, a| matrix[b * ks + a]);
        let xi = e.coordinate;
        let fail = |what: &str| {
            CubeError::Internal(format!(
                "{what} on edge {} -> {}",
                self.g.format_state(e.source),
                self.g.format_state(e.target)
            ))
        };
        let wedge = match e.kind {
            EdgeKind::Plain => {
                if kt + 1 != ks {
                    return Err(fail("plain edge must lower the rank by one"));
                }
                let xs = IntMatrix::from_fn(ks, 1, |a, _| ms.projection[a * n + xi]);
                if !m.mul(&xs).is_zero() {
                    return Err(fail("x_i is not in the kernel"));
                }
                let f = linalg::invariant_factors(&m);
                if f.len() != kt || f.iter().any(|x| *x != BigInt::from(1)) {
                    return Err(fail("plain map is not surjective"));
                }
                None
            }
            EdgeKind::Wedge => {
                if kt != ks + 1 {
                    return Err(fail("wedge edge must raise the rank by one"));
                }
                let w = mt.class_of(xi);
                let full = IntMatrix::from_fn(kt, kt, |b, a| if a == 0 { w[b] } else { matrix[b * ks + a - 1] });
                let d = linalg::det(&full)?;
                if d.to_i64().map(i64::abs) != Some(1) {
                    return Err(fail("wedge map is not an isomorphism onto x_i ∧ Λ*V"));
                }
                Some(w)
            }
        };
        Ok(EdgeMap { kind: e.kind, source_rank: ks, target_rank: kt, matrix, wedge })
    }

    /// Classifies the face spanned by coordinates `i`, `j` at its source corner `s`.
    pub fn classify_face(&self, s: State, i: usize, j: usize, convention: Convention) -> Result<FaceType, CubeError> {
        self.classify_inner(s, i, j, convention, true)
    }

    fn classify_inner(
        &self,
        s: State,
        i: usize,
        j: usize,
        convention: Convention,
        verify: bool,
    ) -> Result<FaceType, CubeError> {
        let g = self.g;
        if i == j || i >= g.n() || j >= g.n() || !g.is_arrow_source(s, i) || !g.is_arrow_source(s, j) {
            return Err(CubeError::NotAFace {
                state: g.format_state(s),
                i: g.name(i.min(g.n().saturating_sub(1))).to_string(),
                j: g.name(j.min(g.n().saturating_sub(1))).to_string(),
            });
        }
        let (si, sj, sij) = (s.toggle(i), s.toggle(j), s.toggle(i).toggle(j));
        let c0 = self.corank(s) as i64;
        let d = |t: State| self.corank(t) as i64 - c0;
        let pattern = (d(si), d(sj), d(sij));
        let face = match pattern {
            (1, 1, 2) => FaceType { raw: 1, class: FaceClass::A },
            (-1, -1, -2) => FaceType { raw: 2, class: FaceClass::C },
            (a, b, 0) if a == -b && a.abs() == 1 => FaceType { raw: 3, class: FaceClass::C },
            (-1, -1, 0) => {
                let m = self.module(sij);
                let ratio = unit_ratio(&m.class_of(i), &m.class_of(j))
                    .ok_or_else(|| CubeError::Internal("x_i, x_j not proportional by a unit".into()))?;
                FaceType { raw: 5, class: if ratio == 1 { FaceClass::C } else { FaceClass::A } }
            }
            (1, 1, 0) => {
                let (vi, vj) = (g.vertex(i).is_inner(), g.vertex(j).is_inner());
                if vi == vj {
                    return Err(CubeError::LemmaViolation {
                        state: g.format_state(s),
                        coordinate: format!("{} and {} (both {})", g.name(i), g.name(j), if vi { "inner" } else { "outer" }),
                    });
                }
                let (a, b) = if vi { (i, j) } else { (j, i) };
                let m = self.module(s.toggle(a));
                let c = unit_ratio(&m.class_of(b), &m.class_of(a))
                    .ok_or_else(|| CubeError::Internal("x_a, x_b not proportional by a unit".into()))?;
                let x = match convention {
                    Convention::Inner => c == 1,
                    Convention::Signed => c == g.sign(b).value(),
                };
                FaceType { raw: 4, class: if x { FaceClass::X } else { FaceClass::Y } }
            }
            _ => {
                return Err(CubeError::Internal(format!(
                    "impossible rank pattern {pattern:?} at {}",
                    g.format_state(s)
                )))
            }
        };
        if verify {
            self.verify_composites(s, i, j, face)?;
        }
        Ok(face)
    }

    /// Checks that the two composites around the face are equal (C), opposite (A)
    /// or both zero (type 4).
    fn verify_composites(&self, s: State, i: usize, j: usize, face: FaceType) -> Result<(), CubeError> {
        let (si, sj) = (s.toggle(i), s.toggle(j));
        let ei = self.cached_map(s, i)?;
        let ej = self.cached_map(s, j)?;
        let eij = self.cached_map(si, j)?;
        let eji = self.cached_map(sj, i)?;
        let k = self.module(s).rank;
        let mismatch = || CubeError::CompositeMismatch {
            state: self.g.format_state(s),
            i: self.g.name(i).to_string(),
            j: self.g.name(j).to_string(),
            class: face.class,
        };
        for mask in 0..1u32 << k {
            let p = eij.apply_element(&ei.apply(mask)?)?;
            let q = eji.apply_element(&ej.apply(mask)?)?;
            let ok = match (face.raw, face.class) {
                (4, _) => p.is_zero() && q.is_zero(),
                (_, FaceClass::C) => p == q,
                (_, FaceClass::A) => p == q.negated(),
                _ => false,
            };
            if !ok {
                return Err(mismatch());
            }
        }
        Ok(())
    }

    /// Classifies every face, indexed by [`face_index`].
    pub fn faces(&self, convention: Convention) -> Result<FaceTable, CubeError> {
        self.faces_with(convention, true)
    }

    /// As [`StateCube::faces`]; `verify = false` skips the composite check.
    pub fn faces_with(&self, convention: Convention, verify: bool) -> Result<FaceTable, CubeError> {
        let n = self.n();
        if n < 2 {
            return Ok(FaceTable { n, convention, classes: Vec::new() });
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let per = 1u64 << (n - 2);
        let classes: Vec<FaceType> = pairs
            .par_iter()
            .flat_map_iter(|&(i, j)| (0..per).map(move |r| (i, j, insert_zero(insert_zero(r, i), j))))
            .map(|(i, j, y)| self.classify_inner(self.state(y), i, j, convention, verify))
            .collect::<Result<_, _>>()?;
        Ok(FaceTable { n, convention, classes })
    }
}

/// Classes of all faces of a cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceTable {
    n: usize,
    pub convention: Convention,
    classes: Vec<FaceType>,
}

impl FaceTable {
    pub fn get(&self, y: u64, i: usize, j: usize) -> FaceType {
        let (i, j) = (i.min(j), i.max(j));
        self.classes[face_index(self.n, y, i, j)]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `(y, i, j, type)` for every face.
    pub fn iter(&self) -> impl Iterator<Item = (u64, usize, usize, FaceType)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).flat_map(move |(i, j)| {
            (0..1u64 << (n - 2)).map(move |r| {
                let y = insert_zero(insert_zero(r, i), j);
                (y, i, j, self.get(y, i, j))
            })
        })
    }

    /// Face counts per class, in the order A, C, X, Y.
    pub fn class_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for f in &self.classes {
            c[f.class as usize] += 1;
        }
        c
    }

    /// Face counts per raw type 1..=5.
    pub fn raw_counts(&self) -> [usize; 5] {
        let mut c = [0; 5];
        for f in &self.classes {
            c[f.raw as usize - 1] += 1;
        }
        c
    }
}

/// Signs `ε(e) = ±1` on every cube edge, stored as `δ(e)` with `ε = (-1)^δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeAssignment {
    pub kind: AssignmentKind,
    n: usize,
    init: u64,
    delta: Vec<bool>,
}

impl EdgeAssignment {
    /// `ε` of the arrow leaving `s` along `i`.
    pub fn sign(&self, s: State, i: usize) -> i64 {
        if self.delta[edge_index(self.n, s.bits() ^ self.init, i)] {
            -1
        } else {
            1
        }
    }

    fn delta_rel(&self, y: u64, i: usize) -> bool {
        self.delta[edge_index(self.n, y, i)]
    }

    /// Number of edges with `ε = -1`.
    pub fn minus_count(&self) -> usize {
        self.delta.iter().filter(|&&d| d).count()
    }

    /// The assignment with every edge at `s` negated. Face parities are unchanged.
    pub fn regauge(&self, s: State) -> EdgeAssignment {
        let mut out = self.clone();
        let y = s.bits() ^ self.init;
        for i in 0..self.n {
            let src = y & !(1 << i);
            out.delta[edge_index(self.n, src, i)] ^= true;
        }
        out
    }

    /// Flips one edge sign; used for negative controls.
    pub fn corrupted(&self, s: State, i: usize) -> EdgeAssignment {
        let mut out = self.clone();
        out.delta[edge_index(self.n, s.bits() ^ self.init, i)] ^= true;
        out
    }

    /// First face whose parity disagrees with the assignment kind.
    pub fn first_violation(&self, faces: &FaceTable) -> Option<(u64, usize, usize)> {
        faces.iter().find_map(|(y, i, j, f)| {
            let p = self.delta_rel(y, i) ^ self.delta_rel(y, j) ^ self.delta_rel(y | 1 << i, j) ^ self.delta_rel(y | 1 << j, i);
            (p != self.kind.target_parity(f.class)).then_some((y, i, j))
        })
    }
}

fn describe_face(cube: &StateCube, y: u64, i: usize, j: usize) -> String {
    let g = cube.graph();
    format!("{}; {}, {}", g.format_state(cube.state(y)), g.name(i), g.name(j))
}

/// Solves the face parity system by gauge fixing: the arrow `(y, i)` gets `δ = 0`
/// when `y` has no bit below `i`; otherwise, with `j` the lowest bit of `y`, the
/// face `(y - e_j; j, i)` determines `δ(y, i)`. Every face is verified afterwards.
pub fn solve_edge_assignment(
    cube: &StateCube,
    faces: &FaceTable,
    kind: AssignmentKind,
) -> Result<EdgeAssignment, CubeError> {
    let n = cube.n();
    let init = cube.coords(State::empty());
    let count = if n == 0 { 0 } else { n << (n - 1) };
    let mut delta = vec![false; count];
    for y in 0..1u64 << n {
        if y == 0 {
            continue;
        }
        let j = y.trailing_zeros() as usize;
        let base = y & !(1 << j);
        for i in (j + 1..n).filter(|&i| y >> i & 1 == 0) {
            let t = kind.target_parity(faces.get(base, j, i).class);
            delta[edge_index(n, y, i)] = t ^ delta[edge_index(n, base, i)];
        }
    }
    let ea = EdgeAssignment { kind, n, init, delta };
    if let Some((y, i, j)) = ea.first_violation(faces) {
        return Err(CubeError::Infeasible { kind, convention: faces.convention, face: describe_face(cube, y, i, j) });
    }
    Ok(ea)
}

/// The same system solved by dense GF(2) elimination; feasible inputs give a
/// (possibly different) valid assignment. Intended for small cubes.
pub fn solve_edge_assignment_dense(
    cube: &StateCube,
    faces: &FaceTable,
    kind: AssignmentKind,
) -> Result<EdgeAssignment, CubeError> {
    let n = cube.n();
    let count = if n == 0 { 0 } else { n << (n - 1) };
    let mut rows = Vec::with_capacity(faces.len());
    let mut rhs = Vec::with_capacity(faces.len());
    for (y, i, j, f) in faces.iter() {
        rows.push(vec![
            edge_index(n, y, i),
            edge_index(n, y, j),
            edge_index(n, y | 1 << i, j),
            edge_index(n, y | 1 << j, i),
        ]);
        rhs.push(kind.target_parity(f.class));
    }
    match gf2_solve(&rows, count, &rhs) {
        Some(delta) => Ok(EdgeAssignment { kind, n, init: cube.coords(State::empty()), delta }),
        None => Err(CubeError::Infeasible { kind, convention: faces.convention, face: "(dense system)".into() }),
    }
}

/// Result of checking every 3-dimensional subcube.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParityReport {
    pub cubes: usize,
    /// `(y, [i, j, k], #A + #X, #A + #Y)` for each violating subcube.
    pub violations: Vec<(u64, [usize; 3], usize, usize)>,
}

impl ParityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every 3-subcube must hold an even number of A+X faces and of A+Y faces.
pub fn validate_cube_parity(faces: &FaceTable) -> ParityReport {
    let n = faces.n;
    let mut report = ParityReport::default();
    if n < 3 {
        return report;
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for r in 0..1u64 << (n - 3) {
                    let y = insert_zero(insert_zero(insert_zero(r, i), j), k);
                    let six = [
                        faces.get(y, i, j),
                        faces.get(y | 1 << k, i, j),
                        faces.get(y, i, k),
                        faces.get(y | 1 << j, i, k),
                        faces.get(y, j, k),
                        faces.get(y | 1 << i, j, k),
                    ];
                    let count = |c: FaceClass| six.iter().filter(|f| f.class == FaceClass::A || f.class == c).count();
                    let (ax, ay) = (count(FaceClass::X), count(FaceClass::Y));
                    report.cubes += 1;
                    if ax % 2 == 1 || ay % 2 == 1 {
                        report.violations.push((y, [i, j, k], ax, ay));
                    }
                }
            }
        }
    }
    report
}

/// Convenience: the cube and its faces under `convention`.
pub fn cube_edges(g: &LabeledGraph) -> Result<Vec<CubeEdge>, CubeError> {
    Ok(StateCube::new(g)?.edges())
}

/// Classifies one face without building the whole cube.
pub fn classify_face(
    g: &LabeledGraph,
    s: State,
    i: usize,
    j: usize,
    convention: Convention,
) -> Result<FaceType, CubeError> {
    StateCube::new(g)?.classify_face(s, i, j, convention)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, graph};

    fn st(ix: &[usize]) -> State {
        State::from_indices(ix.iter().copied())
    }

    #[test]
    fn e1_state_modules() {
        let g = graph(fixtures::E1);
        assert_eq!(state_module(&g, State::empty()).unwrap().rank, 0);
        let m = state_module(&g, st(&[0])).unwrap();
        assert_eq!(m.rank, 1);
        assert_eq!(m.class_of(0), m.class_of(1));
        assert_eq!(m.class_of(0)[0].abs(), 1);
        assert_eq!(state_module(&g, st(&[0, 1])).unwrap().rank, 0);
        assert_eq!(relation_matrix(&g, st(&[0])), IntMatrix::from_rows(vec![vec![0, 0], vec![-1, 1]]));
    }

    #[test]
    fn odd_square_has_torsion() {
        let g = graph(fixtures::ODD4);
        let err = StateCube::new(&g).err().unwrap();
        assert!(matches!(err, CubeError::Torsion { .. }), "{err}");
    }

    #[test]
    fn xi_zero_examples() {
        let g = graph(fixtures::E1);
        assert!(xi_zero(&g, State::empty(), 0).unwrap());
        assert!(!xi_zero(&g, st(&[0]), 1).unwrap());
    }

    #[test]
    fn e1_edges_and_maps() {
        let g = graph(fixtures::E1);
        let cube = StateCube::new(&g).unwrap();
        let edges = cube.edges();
        assert_eq!(edges.len(), 4);
        assert!(edges.iter().all(|e| e.target.len() == e.source.len() + 1));
        let first = cube.edge(State::empty(), 0);
        assert_eq!(first.kind, EdgeKind::Wedge);
        let m = cube.edge_map(&first).unwrap();
        assert_eq!(m.apply(0).unwrap().tuples(), vec![(vec![0], cube.module(st(&[0])).class_of(0)[0])]);
        let second = cube.edge(st(&[0]), 1);
        assert_eq!(second.kind, EdgeKind::Plain);
        let m = cube.edge_map(&second).unwrap();
        assert_eq!(m.apply(0).unwrap(), ExteriorElement::one(0));
        assert!(m.apply(1).unwrap().is_zero());
    }

    #[test]
    fn unknot_cubes() {
        let g = graph(fixtures::UNKNOT_POS);
        let cube = StateCube::new(&g).unwrap();
        let edges = cube.edges();
        assert_eq!(edges.len(), 1);
        assert_eq!((edges[0].source, edges[0].target), (st(&[0]), State::empty()));
        let g = graph(fixtures::UNKNOT_NEG);
        let cube = StateCube::new(&g).unwrap();
        let e = cube.edge(State::empty(), 0);
        assert_eq!(e.kind, EdgeKind::Wedge);
        let img = cube.edge_map(&e).unwrap().apply(0).unwrap();
        assert_eq!(img.tuples().len(), 1);
        assert_eq!(img.tuples()[0].1.abs(), 1);
    }

    #[test]
    fn e1_face_conventions() {
        let g = graph(fixtures::E1);
        let cube = StateCube::new(&g).unwrap();
        let inner = cube.classify_face(State::empty(), 0, 1, Convention::Inner).unwrap();
        assert_eq!(inner, FaceType { raw: 4, class: FaceClass::X });
        let signed = cube.classify_face(State::empty(), 0, 1, Convention::Signed).unwrap();
        assert_eq!(signed, FaceType { raw: 4, class: FaceClass::Y });
        assert!(matches!(
            cube.classify_face(st(&[0]), 0, 1, Convention::Signed),
            Err(CubeError::NotAFace { .. })
        ));
    }

    #[test]
    fn isolated_pairs() {
        let neg = LabeledGraph::parse("vertex a 0 -\nvertex b 0 -\n").unwrap();
        let cube = StateCube::new(&neg).unwrap();
        assert_eq!(cube.classify_face(State::empty(), 0, 1, Convention::Signed).unwrap(), FaceType {
            raw: 1,
            class: FaceClass::A
        });
        let pos = LabeledGraph::parse("vertex a 0 +\nvertex b 0 +\n").unwrap();
        let cube = StateCube::new(&pos).unwrap();
        assert_eq!(cube.classify_face(st(&[0, 1]), 0, 1, Convention::Signed).unwrap(), FaceType {
            raw: 2,
            class: FaceClass::C
        });
    }

    #[test]
    fn indices_are_bijective() {
        let n = 5;
        let mut seen = vec![false; n << (n - 1)];
        for y in 0..1u64 << n {
            for i in (0..n).filter(|&i| y >> i & 1 == 0) {
                let k = edge_index(n, y, i);
                assert!(!seen[k]);
                seen[k] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
        let mut seen = vec![false; 10 << (n - 2)];
        for y in 0..1u64 << n {
            for i in 0..n {
                for j in i + 1..n {
                    if y >> i & 1 == 0 && y >> j & 1 == 0 {
                        let k = face_index(n, y, i, j);
                        assert!(!seen[k]);
                        seen[k] = true;
                    }
                }
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn assignments_on_fixtures() {
        for name in ["UNKNOT_NEG", "E1", "EVEN4", "OM3"] {
            let g = fixtures::by_name(name).unwrap();
            let cube = StateCube::new(&g).unwrap();
            let faces = cube.faces(Convention::Signed).unwrap();
            assert!(validate_cube_parity(&faces).is_clean(), "{name}");
            for kind in [AssignmentKind::X, AssignmentKind::Y] {
                let a = solve_edge_assignment(&cube, &faces, kind).unwrap();
                assert_eq!(a, solve_edge_assignment(&cube, &faces, kind).unwrap());
                assert_eq!(a.first_violation(&faces), None);
                let b = a.regauge(State::empty());
                assert_ne!(a, b);
                assert_eq!(b.first_violation(&faces), None);
                let d = solve_edge_assignment_dense(&cube, &faces, kind).unwrap();
                assert_eq!(d.first_violation(&faces), None);
            }
        }
        let g = graph(fixtures::UNKNOT_NEG);
        let cube = StateCube::new(&g).unwrap();
        let a = solve_edge_assignment(&cube, &cube.faces(Convention::Signed).unwrap(), AssignmentKind::X).unwrap();
        assert_eq!(a.minus_count(), 0);
    }

    #[test]
    fn size_bound() {
        let text: String = (0..17).map(|i| format!("vertex v{i} 0 -\n")).collect();
        let g = LabeledGraph::parse(&text).unwrap();
        assert!(matches!(StateCube::new(&g), Err(CubeError::SizeBound(17))));
    }
}
