//! Reidemeister moves on labeled oriented bipartite graphs and a line-based
//! move-script language.
//!
//! All moves take vertex names and return a new graph; the input is never
//! modified. Newly added vertices are appended after the existing ones.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{is_identifier, GraphError, LabeledGraph, Sign, State, Vertex};
use crate::pu::{self, is_pu, PuMethod};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex `{0}` is not isolated")]
    NotIsolated(String),
    #[error("twin signs must be opposite")]
    SignsNotOpposite,
    #[error("neighborhood mixes both parts")]
    NeighborhoodMixedParts,
    #[error("one direction is required per neighbor ({neighbors} neighbors, {dirs} directions)")]
    DirectionCount { neighbors: usize, dirs: usize },
    #[error("`{0}` and `{1}` are not removable twins: {2}")]
    NotTwins(String, String, String),
    #[error("result is not PU: {0}")]
    PuViolation(String),
    #[error("third move needs all three vertices labeled `-`")]
    BadSigns,
    #[error("`{0}` must be adjacent to exactly the two other move vertices")]
    BadNeighborhood(String),
    #[error("third move needs `{0}` -> `{1}` and `{0}` -> `{2}`")]
    BadDirections(String, String, String),
    #[error("input is not PU: {0}")]
    NotPu(String),
    #[error("not an inverse third-move configuration: {0}")]
    NotInverseConfiguration(String),
    #[error("`{0}` and `{1}` are not adjacent")]
    NotAdjacent(String, String),
    #[error("move vertices must be distinct")]
    RepeatedVertex,
}

/// Direction of a new twin edge relative to the twin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    /// twin -> neighbor
    Out,
    /// neighbor -> twin
    In,
}

impl Dir {
    fn symbol(self) -> char {
        match self {
            Dir::Out => 'o',
            Dir::In => 'i',
        }
    }
}

/// `R`: reverse every edge at `v`.
pub fn apply_r(g: &LabeledGraph, v: &str) -> Result<LabeledGraph, MoveError> {
    Ok(pu::reverse_at(g, g.index(v)?))
}

/// `Ω1` addition of an isolated vertex.
pub fn omega1_add(g: &LabeledGraph, name: &str, part: u8, sign: Sign) -> Result<LabeledGraph, MoveError> {
    check_name(name)?;
    let mut h = g.clone();
    h.push_vertex(Vertex::new(name, part.min(1), sign))?;
    Ok(h)
}

/// `Ω1` removal of an isolated vertex.
pub fn omega1_remove(g: &LabeledGraph, v: &str) -> Result<LabeledGraph, MoveError> {
    let i = g.index(v)?;
    if !g.is_isolated(i) {
        return Err(MoveError::NotIsolated(v.to_string()));
    }
    Ok(g.remove_vertices(State::empty().with(i)))
}

fn check_name(name: &str) -> Result<(), MoveError> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(GraphError::Syntax(format!("invalid vertex name `{name}`")).into())
    }
}

/// Arguments of an `Ω2` addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twins {
    pub names: [String; 2],
    pub signs: [Sign; 2],
    pub neighbors: Vec<String>,
    pub dirs: Vec<Dir>,
}

/// `Ω2` addition of two nonadjacent twins with opposite signs. The result must be
/// PU (the guard of the principally unimodular second move).
pub fn omega2_add(g: &LabeledGraph, twins: &Twins) -> Result<LabeledGraph, MoveError> {
    let h = omega2_add_unguarded(g, twins)?;
    is_pu(&h, PuMethod::MinorsB).map_err(|c| MoveError::PuViolation(c.describe(&h)))?;
    Ok(h)
}

/// `Ω2` addition without the PU guard.
pub fn omega2_add_unguarded(g: &LabeledGraph, twins: &Twins) -> Result<LabeledGraph, MoveError> {
    if twins.signs[0] == twins.signs[1] {
        return Err(MoveError::SignsNotOpposite);
    }
    if twins.neighbors.len() != twins.dirs.len() {
        return Err(MoveError::DirectionCount { neighbors: twins.neighbors.len(), dirs: twins.dirs.len() });
    }
    let nbrs: Vec<usize> = twins.neighbors.iter().map(|w| g.index(w)).try_collect()?;
    if !nbrs.iter().map(|&w| g.part(w)).all_equal() {
        return Err(MoveError::NeighborhoodMixedParts);
    }
    let part = nbrs.first().map_or(0, |&w| 1 - g.part(w));
    let mut h = g.clone();
    for (name, &sign) in twins.names.iter().zip(&twins.signs) {
        check_name(name)?;
        let x = h.push_vertex(Vertex::new(name.clone(), part, sign))?;
        for (&w, &d) in nbrs.iter().zip(&twins.dirs) {
            match d {
                Dir::Out => h.add_edge(x, w)?,
                Dir::In => h.add_edge(w, x)?,
            }
        }
    }
    Ok(h)
}

/// `Ω2` removal of twins `u`, `v`: nonadjacent, opposite signs, identical rows.
pub fn omega2_remove(g: &LabeledGraph, u: &str, v: &str) -> Result<LabeledGraph, MoveError> {
    let (a, b) = (g.index(u)?, g.index(v)?);
    let not_twins = |why: &str| MoveError::NotTwins(u.to_string(), v.to_string(), why.to_string());
    if a == b {
        return Err(MoveError::RepeatedVertex);
    }
    if g.adjacent(a, b) {
        return Err(not_twins("adjacent"));
    }
    if g.sign(a) == g.sign(b) {
        return Err(not_twins("equal signs"));
    }
    if g.row(a) != g.row(b) {
        return Err(not_twins("neighborhoods or directions differ"));
    }
    Ok(g.remove_vertices(State::from_indices([a, b])))
}

fn distinct3(g: &LabeledGraph, u: &str, v: &str, w: &str) -> Result<(usize, usize, usize), MoveError> {
    let (a, b, c) = (g.index(u)?, g.index(v)?, g.index(w)?);
    if a == b || b == c || a == c {
        return Err(MoveError::RepeatedVertex);
    }
    Ok((a, b, c))
}

/// `Ω3`: `u`, `v`, `w` labeled `-`, `N(u) = {v, w}`, `u -> v`, `u -> w`.
///
/// The row of `u` becomes `row(v) - row(w)` off the move vertices, `u` is
/// disconnected from `v` and `w`, and `v`, `w` are relabeled `+`. The new
/// neighbors of `u` lie in the part of `u`, so `u` moves to the part of `v`.
pub fn omega3_forward(g: &LabeledGraph, u: &str, v: &str, w: &str) -> Result<LabeledGraph, MoveError> {
    let (a, b, c) = distinct3(g, u, v, w)?;
    if [a, b, c].iter().any(|&x| g.sign(x) != Sign::Minus) {
        return Err(MoveError::BadSigns);
    }
    if g.neighbors(a) != [b.min(c), b.max(c)] {
        return Err(MoveError::BadNeighborhood(u.to_string()));
    }
    if g.entry(a, b) != 1 || g.entry(a, c) != 1 {
        return Err(MoveError::BadDirections(u.to_string(), v.to_string(), w.to_string()));
    }
    let mut h = g.clone();
    h.set_entry(a, b, 0);
    h.set_entry(a, c, 0);
    h.set_part(a, g.part(b));
    for t in (0..g.n()).filter(|&t| t != a && t != b && t != c) {
        let d = g.entry(b, t) - g.entry(c, t);
        if d.abs() > 1 {
            return Err(MoveError::NotPu(format!(
                "det A({}) = 4",
                g.format_state(State::from_indices([a, b, c, t]))
            )));
        }
        h.set_entry(a, t, d);
    }
    h.set_sign(b, Sign::Plus);
    h.set_sign(c, Sign::Plus);
    Ok(h)
}

/// Inverse of [`omega3_forward`].
pub fn omega3_backward(g: &LabeledGraph, u: &str, v: &str, w: &str) -> Result<LabeledGraph, MoveError> {
    let (a, b, c) = distinct3(g, u, v, w)?;
    let bad = |why: String| MoveError::NotInverseConfiguration(why);
    if g.sign(a) != Sign::Minus || g.sign(b) != Sign::Plus || g.sign(c) != Sign::Plus {
        return Err(bad(format!("labels must be `{u}` -, `{v}` +, `{w}` +")));
    }
    if g.part(b) != g.part(c) || g.part(a) != g.part(b) {
        return Err(bad("the three vertices must lie in one part".into()));
    }
    for t in (0..g.n()).filter(|&t| t != a && t != b && t != c) {
        if g.entry(a, t) != g.entry(b, t) - g.entry(c, t) {
            return Err(bad(format!("row of `{u}` differs from row(`{v}`) - row(`{w}`) at `{}`", g.name(t))));
        }
    }
    let mut h = g.clone();
    for t in 0..g.n() {
        h.set_entry(a, t, 0);
    }
    h.set_part(a, 1 - g.part(b));
    h.set_entry(a, b, 1);
    h.set_entry(a, c, 1);
    h.set_sign(b, Sign::Minus);
    h.set_sign(c, Sign::Minus);
    Ok(h)
}

/// `Ω4` via the pivot formula
/// `ã_ij = a_ij - a_pq a_ip a_jq + a_pq a_iq a_jp` off `{p, q}`, `ã_pq = -a_pq`,
/// with labels `(a, b) -> (-b, -a)`.
///
/// Fails with `NotPu` if an entry leaves `{0, ±1}` or a new square is odd, which
/// cannot happen on PU input.
pub fn omega4(g: &LabeledGraph, u: &str, v: &str) -> Result<LabeledGraph, MoveError> {
    let (p, q) = adjacent_pair(g, u, v)?;
    let apq = i64::from(g.entry(p, q));
    let a = |i: usize, j: usize| i64::from(g.entry(i, j));
    let mut h = g.clone();
    for i in (0..g.n()).filter(|&i| i != p && i != q) {
        for j in (i + 1..g.n()).filter(|&j| j != p && j != q) {
            let x = a(i, j) - apq * a(i, p) * a(j, q) + apq * a(i, q) * a(j, p);
            if x.abs() > 1 {
                return Err(MoveError::NotPu(format!("new entry ({}, {}) = {x}", g.name(i), g.name(j))));
            }
            h.set_entry(i, j, x as i8);
        }
    }
    finish_omega4(g, &mut h, p, q);
    for t in g.neighbors(p).into_iter().filter(|&t| t != q) {
        for w in g.neighbors(q).into_iter().filter(|&w| w != p) {
            if !g.adjacent(t, w) && h.adjacent(t, w) && pu::codirectional_count(&h, &[p, t, w, q]) % 2 == 1 {
                return Err(MoveError::NotPu(format!(
                    "new square {} is odd",
                    [p, t, w, q].iter().map(|&x| g.name(x)).join("")
                )));
            }
        }
    }
    Ok(h)
}

/// `Ω4` as a graph operation: reverse `uv`, toggle adjacency between `N(u)` and
/// `N(v)`, and orient each new edge `tw` so that the square `u t w v` is even.
/// Defined on every graph; agrees with [`omega4`] on PU input.
pub fn omega4_general(g: &LabeledGraph, u: &str, v: &str) -> Result<LabeledGraph, MoveError> {
    let (p, q) = adjacent_pair(g, u, v)?;
    let mut h = g.clone();
    finish_omega4(g, &mut h, p, q);
    for t in g.neighbors(p).into_iter().filter(|&t| t != q) {
        for w in g.neighbors(q).into_iter().filter(|&w| w != p) {
            if g.adjacent(t, w) {
                h.set_entry(t, w, 0);
            } else {
                h.set_entry(t, w, 1);
                if pu::codirectional_count(&h, &[p, t, w, q]) % 2 == 1 {
                    h.set_entry(t, w, -1);
                }
            }
        }
    }
    Ok(h)
}

fn adjacent_pair(g: &LabeledGraph, u: &str, v: &str) -> Result<(usize, usize), MoveError> {
    let (p, q) = (g.index(u)?, g.index(v)?);
    if !g.adjacent(p, q) {
        return Err(MoveError::NotAdjacent(u.to_string(), v.to_string()));
    }
    Ok((p, q))
}

fn finish_omega4(g: &LabeledGraph, h: &mut LabeledGraph, p: usize, q: usize) {
    h.set_entry(p, q, -g.entry(p, q));
    h.set_sign(p, g.sign(q).flip());
    h.set_sign(q, g.sign(p).flip());
}

/// A name starting with `base` such that neither it nor its primed form is used.
pub fn fresh_name(g: &LabeledGraph, base: &str) -> String {
    (0..)
        .map(|k| if k == 0 { base.to_string() } else { format!("{base}{k}") })
        .find(|n| g.index_of(n).is_none() && g.index_of(&format!("{n}'")).is_none())
        .expect("some name is free")
}

/// Reverses the single edge `uv` by the twin construction: add twins `w, w'`
/// with `N = {v}`, add twins `t, t'` with `N = {u, w}` making `u v w t` odd,
/// apply the general `Ω4` twice at `(w, t)`, then remove both twin pairs.
///
/// The intermediate graphs contain an odd square and are not PU, so the script
/// uses the unguarded `O2+!` and the general `O4!`.
pub fn flip_edge_macro(g: &LabeledGraph, u: &str, v: &str) -> Result<(MoveScript, LabeledGraph), MoveError> {
    let (p, q) = adjacent_pair(g, u, v)?;
    let w = fresh_name(g, "w");
    let t = fresh_name(g, "t");
    let (w2, t2) = (format!("{w}'"), format!("{t}'"));
    // with w -> v and t -> u, the square u v w t has [u -> v] + 1 codirectional
    // edges before the w-t edge
    let base = usize::from(g.entry(p, q) == 1) + 1;
    let tw = if base % 2 == 1 { Dir::Out } else { Dir::In };
    let moves = vec![
        Move::O2Add {
            twins: Twins {
                names: [w.clone(), w2.clone()],
                signs: [Sign::Plus, Sign::Minus],
                neighbors: vec![v.to_string()],
                dirs: vec![Dir::Out],
            },
            guarded: false,
        },
        Move::O2Add {
            twins: Twins {
                names: [t.clone(), t2.clone()],
                signs: [Sign::Plus, Sign::Minus],
                neighbors: vec![u.to_string(), w.clone()],
                dirs: vec![Dir::Out, tw],
            },
            guarded: false,
        },
        Move::O4 { u: w.clone(), v: t.clone(), general: true },
        Move::O4 { u: w.clone(), v: t.clone(), general: true },
        Move::O2Remove(t, t2),
        Move::O2Remove(w, w2),
    ];
    let script = MoveScript(moves);
    let out = apply_script(g, &script).map_err(|e| *e.cause)?;
    let mut expected = g.clone();
    expected.set_entry(p, q, -g.entry(p, q));
    assert_eq!(out, expected, "edge flip construction changed more than the edge");
    Ok((script, out))
}

/// One step of a move script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    R(String),
    O1Add { name: String, part: u8, sign: Sign },
    O1Remove(String),
    O2Add { twins: Twins, guarded: bool },
    O2Remove(String, String),
    O3(String, String, String),
    O3Inv(String, String, String),
    O4 { u: String, v: String, general: bool },
}

impl Move {
    pub fn apply(&self, g: &LabeledGraph) -> Result<LabeledGraph, MoveError> {
        match self {
            Move::R(v) => apply_r(g, v),
            Move::O1Add { name, part, sign } => omega1_add(g, name, *part, *sign),
            Move::O1Remove(v) => omega1_remove(g, v),
            Move::O2Add { twins, guarded: true } => omega2_add(g, twins),
            Move::O2Add { twins, guarded: false } => omega2_add_unguarded(g, twins),
            Move::O2Remove(u, v) => omega2_remove(g, u, v),
            Move::O3(u, v, w) => omega3_forward(g, u, v, w),
            Move::O3Inv(u, v, w) => omega3_backward(g, u, v, w),
            Move::O4 { u, v, general: false } => omega4(g, u, v),
            Move::O4 { u, v, general: true } => omega4_general(g, u, v),
        }
    }

    /// Short kind tag, as in the script syntax.
    pub fn kind(&self) -> &'static str {
        match self {
            Move::R(_) => "R",
            Move::O1Add { .. } => "O1+",
            Move::O1Remove(_) => "O1-",
            Move::O2Add { guarded: true, .. } => "O2+",
            Move::O2Add { guarded: false, .. } => "O2+!",
            Move::O2Remove(..) => "O2-",
            Move::O3(..) => "O3",
            Move::O3Inv(..) => "O3inv",
            Move::O4 { general: false, .. } => "O4",
            Move::O4 { general: true, .. } => "O4!",
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::R(v) => write!(f, "R {v}"),
            Move::O1Add { name, part, sign } => write!(f, "O1+ {name} {part} {sign}"),
            Move::O1Remove(v) => write!(f, "O1- {v}"),
            Move::O2Add { twins, .. } => write!(
                f,
                "{} {} {} {} N={} dirs={}",
                self.kind(),
                twins.names[0],
                twins.names[1],
                twins.signs[0],
                twins.neighbors.join(","),
                twins.dirs.iter().map(|d| d.symbol()).collect::<String>()
            ),
            Move::O2Remove(u, v) => write!(f, "O2- {u} {v}"),
            Move::O3(u, v, w) => write!(f, "O3 {u} {v} {w}"),
            Move::O3Inv(u, v, w) => write!(f, "O3inv {u} {v} {w}"),
            Move::O4 { u, v, .. } => write!(f, "{} {u} {v}", self.kind()),
        }
    }
}

impl FromStr for Move {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let arity = |k: usize| -> Result<(), String> {
            if tok.len() == k + 1 {
                Ok(())
            } else {
                Err(format!("`{}` takes {k} arguments, found {}", tok[0], tok.len() - 1))
            }
        };
        let s = |i: usize| tok[i].to_string();
        let Some(&head) = tok.first() else { return Err("empty move".into()) };
        Ok(match head {
            "R" => {
                arity(1)?;
                Move::R(s(1))
            }
            "O1+" => {
                arity(3)?;
                let part = match tok[2] {
                    "0" => 0,
                    "1" => 1,
                    p => return Err(format!("part must be 0 or 1, found `{p}`")),
                };
                Move::O1Add { name: s(1), part, sign: tok[3].parse().map_err(|e: GraphError| e.to_string())? }
            }
            "O1-" => {
                arity(1)?;
                Move::O1Remove(s(1))
            }
            "O2+" | "O2+!" => {
                arity(5)?;
                let sign: Sign = tok[3].parse().map_err(|e: GraphError| e.to_string())?;
                let neighbors = tok[4].strip_prefix("N=").ok_or("expected `N=<w1,...>`")?;
                let dirs = tok[5].strip_prefix("dirs=").ok_or("expected `dirs=<o|i>...`")?;
                let neighbors: Vec<String> =
                    neighbors.split(',').filter(|w| !w.is_empty()).map(str::to_string).collect();
                let dirs: Vec<Dir> = dirs
                    .chars()
                    .map(|c| match c {
                        'o' => Ok(Dir::Out),
                        'i' => Ok(Dir::In),
                        c => Err(format!("direction must be `o` or `i`, found `{c}`")),
                    })
                    .try_collect()?;
                if dirs.len() != neighbors.len() {
                    return Err(format!("{} neighbors but {} directions", neighbors.len(), dirs.len()));
                }
                Move::O2Add {
                    twins: Twins { names: [s(1), s(2)], signs: [sign, sign.flip()], neighbors, dirs },
                    guarded: head == "O2+",
                }
            }
            "O2-" => {
                arity(2)?;
                Move::O2Remove(s(1), s(2))
            }
            "O3" => {
                arity(3)?;
                Move::O3(s(1), s(2), s(3))
            }
            "O3inv" => {
                arity(3)?;
                Move::O3Inv(s(1), s(2), s(3))
            }
            "O4" | "O4!" => {
                arity(2)?;
                Move::O4 { u: s(1), v: s(2), general: head == "O4!" }
            }
            other => return Err(format!("unknown move `{other}`")),
        })
    }
}

/// Ordered list of moves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveScript(pub Vec<Move>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptParseError {
    pub line: usize,
    pub message: String,
}

impl MoveScript {
    /// One move per line; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, ScriptParseError> {
        let mut moves = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            moves.push(content.parse().map_err(|message| ScriptParseError { line: k + 1, message })?);
        }
        Ok(MoveScript(moves))
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for MoveScript {
    type Err = ScriptParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveScript::parse(s)
    }
}

impl fmt::Display for MoveScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {index} failed: {cause}")]
pub struct MoveFailed {
    /// 0-based position in the script.
    pub index: usize,
    pub cause: Box<MoveError>,
}

/// Applies the moves in order; stops at the first failure.
pub fn apply_script(g: &LabeledGraph, script: &MoveScript) -> Result<LabeledGraph, MoveFailed> {
    script.0.iter().enumerate().try_fold(g.clone(), |h, (index, m)| {
        m.apply(&h).map_err(|e| MoveFailed { index, cause: Box::new(e) })
    })
}

/// Every move of a bounded candidate family that applies to `g`, in a fixed
/// order: reversals, first moves (four additions and all removals), second-move
/// additions with neighborhoods of size at most two and all removals, third moves
/// in both directions, and fourth moves on every ordered edge.
pub fn applicable_moves(g: &LabeledGraph) -> Vec<Move> {
    let n = g.n();
    let name = |i: usize| g.name(i).to_string();
    let mut out: Vec<Move> = (0..n).map(|v| Move::R(name(v))).collect();
    let z = fresh_name(g, "z");
    for part in 0..2 {
        for sign in [Sign::Minus, Sign::Plus] {
            out.push(Move::O1Add { name: z.clone(), part, sign });
        }
    }
    out.extend((0..n).filter(|&v| g.is_isolated(v)).map(|v| Move::O1Remove(name(v))));
    let (t1, t2) = (fresh_name(g, "p"), fresh_name(g, "q"));
    let mut hoods: Vec<Vec<usize>> = vec![vec![]];
    hoods.extend((0..n).map(|v| vec![v]));
    hoods.extend((0..n).tuple_combinations().filter(|&(a, b)| g.part(a) == g.part(b)).map(|(a, b)| vec![a, b]));
    for hood in hoods {
        for dirs in (0..hood.len()).map(|_| [Dir::Out, Dir::In]).multi_cartesian_product() {
            out.push(Move::O2Add {
                twins: Twins {
                    names: [t1.clone(), t2.clone()],
                    signs: [Sign::Minus, Sign::Plus],
                    neighbors: hood.iter().map(|&v| name(v)).collect(),
                    dirs,
                },
                guarded: true,
            });
        }
    }
    for (a, b) in (0..n).tuple_combinations() {
        out.push(Move::O2Remove(name(a), name(b)));
    }
    for (a, b, c) in (0..n).tuple_combinations() {
        for (x, y, w) in [(a, b, c), (b, a, c), (c, a, b)] {
            out.push(Move::O3(name(x), name(y), name(w)));
            out.push(Move::O3Inv(name(x), name(y), name(w)));
        }
    }
    for (a, b) in g.edges() {
        out.push(Move::O4 { u: name(a), v: name(b), general: false });
        out.push(Move::O4 { u: name(b), v: name(a), general: false });
    }
    out.into_iter().filter(|m| m.apply(g).is_ok()).collect()
}
