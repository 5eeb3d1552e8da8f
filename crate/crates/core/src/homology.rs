//! The bigraded chain complex `C(G) = ⊕_s Λ*V(s)` and its homology.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::cube::{
    solve_edge_assignment, AssignmentKind, Convention, CubeError, EdgeAssignment, FaceTable, StateCube,
};
use crate::graph::{LabeledGraph, State};
use crate::linalg::sparse::SparseMatrix;
use crate::linalg::LinalgError;
use crate::pu::{is_pu, PuMethod};

/// A bigrade `(i, q)`.
pub type Bigrade = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("graph is not PU: {0}")]
    NotPu(String),
    #[error("boundary does not square to zero at bigrade ({i}, {q})")]
    DSquaredNonzero { i: i64, q: i64 },
    #[error("boundary changes q: {0}")]
    GradingViolation(String),
    #[error("Euler characteristic of the complex disagrees with homology at q = {0}")]
    EulerMismatch(i64),
    #[error("F2 homology disagrees with the universal coefficient theorem")]
    UctMismatch,
    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,
}

impl From<LinalgError> for HomologyError {
    fn from(e: LinalgError) -> Self {
        HomologyError::Cube(e.into())
    }
}

/// A generator: a state and a basis monomial of `Λ*V(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub state: State,
    pub wedge: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    /// Generators per bigrade.
    pub blocks: BTreeMap<Bigrade, Vec<Generator>>,
    /// Boundary from `(i, q)` to `(i + 1, q)`; rows index the target block.
    pub boundaries: BTreeMap<Bigrade, SparseMatrix>,
}

impl ChainComplex {
    pub fn generator_count(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    /// Generator count per homological degree.
    pub fn counts_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(i, _), b) in &self.blocks {
            *out.entry(i).or_insert(0) += b.len();
        }
        out
    }

    fn boundary(&self, g: Bigrade) -> Option<&SparseMatrix> {
        self.boundaries.get(&g)
    }

    /// Checks `∂∘∂ = 0` block by block.
    pub fn check_d_squared(&self) -> Result<(), HomologyError> {
        self.boundaries.par_iter().try_for_each(|(&(i, q), d)| {
            if let Some(next) = self.boundary((i + 1, q)) {
                if !next.mul(d)?.is_zero() {
                    return Err(HomologyError::DSquaredNonzero { i, q });
                }
            }
            Ok(())
        })
    }
}

/// Assembles the complex with differential `∂(u) = Σ ε(e) ∂_e(u)`.
pub fn build_complex(cube: &StateCube, eps: &EdgeAssignment) -> Result<ChainComplex, HomologyError> {
    let g = cube.graph();
    let n = g.n();
    let states: Vec<State> = (0..1u64 << n).map(State::from_bits).collect();
    let grade = |s: State, mask: u32| -> Bigrade {
        let k = cube.module(s).rank as i64;
        (g.grading_i(s), k - 2 * i64::from(mask.count_ones()) + g.grading_i(s))
    };
    let mut blocks: BTreeMap<Bigrade, Vec<Generator>> = BTreeMap::new();
    // position of each generator inside its block, per state
    let mut position: Vec<Vec<usize>> = Vec::with_capacity(states.len());
    for &s in &states {
        let k = cube.module(s).rank;
        let pos = (0..1u32 << k)
            .map(|mask| {
                let b = blocks.entry(grade(s, mask)).or_default();
                b.push(Generator { state: s, wedge: mask });
                b.len() - 1
            })
            .collect();
        position.push(pos);
    }

    type Entry = (Bigrade, usize, usize, i64);
    let entries: Vec<Entry> = states
        .par_iter()
        .map(|&s| -> Result<Vec<Entry>, HomologyError> {
            let mut out = Vec::new();
            for c in (0..n).filter(|&c| g.is_arrow_source(s, c)) {
                let edge = cube.edge(s, c);
                let map = cube.cached_map(s, c)?;
                let sign = eps.sign(s, c);
                for mask in 0..1u32 << map.source_rank {
                    let src = grade(s, mask);
                    for (tmask, coeff) in map.apply(mask)?.terms() {
                        let dst = grade(edge.target, tmask);
                        if dst != (src.0 + 1, src.1) {
                            return Err(HomologyError::GradingViolation(format!(
                                "{} -> {} sends ({}, {}) to ({}, {})",
                                g.format_state(s),
                                g.format_state(edge.target),
                                src.0,
                                src.1,
                                dst.0,
                                dst.1
                            )));
                        }
                        let row = position[edge.target.bits() as usize][tmask as usize];
                        let col = position[s.bits() as usize][mask as usize];
                        out.push((src, row, col, sign * coeff));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut grouped: BTreeMap<Bigrade, Vec<(usize, usize, i64)>> = BTreeMap::new();
    for (b, r, c, v) in entries {
        grouped.entry(b).or_default().push((r, c, v));
    }
    let mut boundaries = BTreeMap::new();
    for (&(i, q), block) in &blocks {
        let target = blocks.get(&(i + 1, q)).map_or(0, Vec::len);
        if target == 0 {
            continue;
        }
        let triplets = grouped.remove(&(i, q)).unwrap_or_default();
        boundaries.insert((i, q), SparseMatrix::from_triplets(target, block.len(), triplets)?);
    }
    let complex = ChainComplex { blocks, boundaries };
    complex.check_d_squared()?;
    Ok(complex)
}

/// One bigraded piece `Z^betti ⊕ ⊕ Z/t`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Group {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands of even order.
    pub fn two_torsion(&self) -> usize {
        self.torsion.iter().filter(|t| t.is_even()).count()
    }
}

/// Homology groups indexed by bigrade; zero groups are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BigradedGroups(pub BTreeMap<Bigrade, Group>);

impl BigradedGroups {
    pub fn get(&self, g: Bigrade) -> Group {
        self.0.get(&g).cloned().unwrap_or_default()
    }

    pub fn total_rank(&self) -> usize {
        self.0.values().map(|g| g.betti).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.0.values().any(|g| !g.torsion.is_empty())
    }

    /// All groups moved by `(di, dq)`.
    pub fn shifted(&self, di: i64, dq: i64) -> BigradedGroups {
        BigradedGroups(self.0.iter().map(|(&(i, q), g)| ((i + di, q + dq), g.clone())).collect())
    }

    fn insert(&mut self, g: Bigrade, group: Group) {
        if !group.is_zero() {
            self.0.insert(g, group);
        }
    }
}

/// One line per group: `h <i> <q> <betti> <torsion|->`.
impl fmt::Display for BigradedGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(i, q), g) in &self.0 {
            let t = if g.torsion.is_empty() {
                "-".to_string()
            } else {
                g.torsion.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            };
            writeln!(f, "h {i} {q} {} {t}", g.betti)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TableParseError {
    pub line: usize,
    pub message: String,
}

impl FromStr for BigradedGroups {
    type Err = TableParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut out = BigradedGroups::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| TableParseError { line: k + 1, message: message.to_string() };
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 || f[0] != "h" {
                return Err(err("expected `h <i> <q> <betti> <torsion|->`"));
            }
            let i = f[1].parse().map_err(|_| err("bad i"))?;
            let q = f[2].parse().map_err(|_| err("bad q"))?;
            let betti = f[3].parse().map_err(|_| err("bad betti"))?;
            let torsion = if f[4] == "-" {
                Vec::new()
            } else {
                f[4].split(',').map(|t| t.parse::<BigInt>().map_err(|_| err("bad torsion"))).collect::<Result<_, _>>()?
            };
            if out.0.contains_key(&(i, q)) {
                return Err(err("repeated bigrade"));
            }
            out.insert((i, q), Group { betti, torsion });
        }
        Ok(out)
    }
}

/// Exact integer homology, block by block.
pub fn integer_homology(c: &ChainComplex) -> BigradedGroups {
    let groups: Vec<(Bigrade, Group)> = c
        .blocks
        .par_iter()
        .map(|(&(i, q), block)| {
            let out_rank = c.boundary((i, q)).map_or(0, SparseMatrix::rank);
            let incoming = c.boundary((i - 1, q)).map(SparseMatrix::invariant_factors).unwrap_or_default();
            let one = BigInt::from(1);
            let betti = block.len() - out_rank - incoming.len();
            let torsion = incoming.into_iter().filter(|t| *t != one).collect();
            ((i, q), Group { betti, torsion })
        })
        .collect();
    let mut out = BigradedGroups::default();
    for (g, group) in groups {
        out.insert(g, group);
    }
    out
}

/// Dimensions of homology with GF(2) coefficients; zero entries omitted.
pub fn f2_homology(c: &ChainComplex) -> BTreeMap<Bigrade, usize> {
    c.blocks
        .par_iter()
        .map(|(&(i, q), block)| {
            let out = c.boundary((i, q)).map_or(0, SparseMatrix::rank_mod2);
            let inc = c.boundary((i - 1, q)).map_or(0, SparseMatrix::rank_mod2);
            ((i, q), block.len() - out - inc)
        })
        .filter(|&(_, d)| d > 0)
        .collect()
}

/// `Σ_i (-1)^i · #generators(i, q)` per `q`.
pub fn euler(c: &ChainComplex) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for (&(i, q), b) in &c.blocks {
        *out.entry(q).or_insert(0) += if i % 2 == 0 { 1 } else { -1 } * b.len() as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// `Σ_i (-1)^i · betti(i, q)` per `q`.
pub fn euler_of(h: &BigradedGroups) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for (&(i, q), g) in &h.0 {
        *out.entry(q).or_insert(0) += if i % 2 == 0 { 1 } else { -1 } * g.betti as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Universal coefficients for a differential raising `i`:
/// `dim H(i,q; F2) = betti(i,q) + t2(i,q) + t2(i+1,q)`.
pub fn uct_check(hz: &BigradedGroups, hf2: &BTreeMap<Bigrade, usize>) -> bool {
    let mut keys: Vec<Bigrade> = hz.0.keys().copied().chain(hf2.keys().copied()).collect();
    keys.extend(hz.0.keys().map(|&(i, q)| (i - 1, q)));
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().all(|(i, q)| {
        let expected = hz.get((i, q)).betti + hz.get((i, q)).two_torsion() + hz.get((i + 1, q)).two_torsion();
        hf2.get(&(i, q)).copied().unwrap_or(0) == expected
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// `H2` shifted by `(di, dq)` equals `H1`.
    Equal { di: i64, dq: i64 },
    Different(String),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::Equal { di, dq } => write!(f, "Equal({di},{dq})"),
            Comparison::Different(why) => write!(f, "Different: {why}"),
        }
    }
}

/// Translates `h2` so its smallest bigrade meets the smallest bigrade of `h1`,
/// then compares exactly.
pub fn align_and_compare(h1: &BigradedGroups, h2: &BigradedGroups) -> Comparison {
    let (a, b) = match (h1.0.keys().next(), h2.0.keys().next()) {
        (None, None) => return Comparison::Equal { di: 0, dq: 0 },
        (Some(a), Some(b)) => (*a, *b),
        _ => return Comparison::Different("one side is zero".into()),
    };
    let (di, dq) = (a.0 - b.0, a.1 - b.1);
    let moved = h2.shifted(di, dq);
    if &moved == h1 {
        return Comparison::Equal { di, dq };
    }
    let mut lines = Vec::new();
    let keys: std::collections::BTreeSet<Bigrade> = h1.0.keys().chain(moved.0.keys()).copied().collect();
    for k in keys {
        let (x, y) = (h1.get(k), moved.get(k));
        if x != y {
            lines.push(format!("({},{}): {:?} vs {:?}", k.0, k.1, x, y));
        }
    }
    Comparison::Different(format!("after shift ({di},{dq}): {}", lines.join("; ")))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Coefficients {
    #[default]
    Z,
    F2,
}

impl FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z" | "Z" => Ok(Coefficients::Z),
            "f2" | "F2" => Ok(Coefficients::F2),
            _ => Err(format!("unknown coefficients `{s}` (expected z or f2)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct KhOptions {
    pub kind: AssignmentKind,
    pub convention: Convention,
    pub coefficients: Coefficients,
}

/// Everything computed along the way by [`khovanov_full`].
#[derive(Debug, Clone)]
pub struct KhReport {
    pub faces: FaceTable,
    pub assignment: EdgeAssignment,
    pub complex: ChainComplex,
    pub integer: BigradedGroups,
    pub f2: BTreeMap<Bigrade, usize>,
}

/// Certifies PU, then cube, assignment, complex and both homologies, with the
/// Euler and universal-coefficient checks enforced.
pub fn khovanov_full(g: &LabeledGraph, opts: KhOptions) -> Result<KhReport, HomologyError> {
    crate::cube::check_size(g)?;
    is_pu(g, PuMethod::MinorsB).map_err(|c| HomologyError::NotPu(c.describe(g)))?;
    let cube = StateCube::new(g)?;
    let faces = cube.faces(opts.convention)?;
    let assignment = solve_edge_assignment(&cube, &faces, opts.kind)?;
    let complex = build_complex(&cube, &assignment)?;
    let integer = integer_homology(&complex);
    let f2 = f2_homology(&complex);
    let (e1, e2) = (euler(&complex), euler_of(&integer));
    if let Some(q) = e1.keys().chain(e2.keys()).find(|q| e1.get(q) != e2.get(q)) {
        return Err(HomologyError::EulerMismatch(*q));
    }
    if !uct_check(&integer, &f2) {
        return Err(HomologyError::UctMismatch);
    }
    Ok(KhReport { faces, assignment, complex, integer, f2 })
}

/// Reduced odd Khovanov homology. With `F2` coefficients each group is reported
/// as its dimension with empty torsion.
pub fn khovanov(g: &LabeledGraph, opts: KhOptions) -> Result<BigradedGroups, HomologyError> {
    let r = khovanov_full(g, opts)?;
    Ok(match opts.coefficients {
        Coefficients::Z => r.integer,
        Coefficients::F2 => f2_as_groups(&r.f2),
    })
}

pub fn f2_as_groups(f2: &BTreeMap<Bigrade, usize>) -> BigradedGroups {
    BigradedGroups(f2.iter().map(|(&k, &d)| (k, Group { betti: d, torsion: Vec::new() })).collect())
}
