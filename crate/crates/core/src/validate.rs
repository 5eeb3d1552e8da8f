//! The invariant battery run by `glkh validate` and the acceptance suite.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::cube::{
    solve_edge_assignment, solve_edge_assignment_dense, validate_cube_parity, AssignmentKind, Convention, CubeError,
    EdgeAssignment, EdgeKind, FaceTable, StateCube,
};
use crate::graph::{LabeledGraph, State};
use crate::homology::{
    align_and_compare, build_complex, euler, euler_of, f2_homology, integer_homology, khovanov, uct_check,
    BigradedGroups, HomologyError, KhOptions,
};
use crate::moves::{applicable_moves, flip_edge_macro};
use crate::pu::{is_pu, random_pu_graph, PuMethod};

/// Largest cube on which the dense GF(2) cross-check runs.
const DENSE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name, passed, detail: detail.into() });
        passed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    pub convention: Convention,
    /// Corrupt one edge sign of the type X assignment; the battery must then fail.
    pub negative_control: bool,
    /// Moves sampled for the invariance check, one per move kind first.
    pub moves: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { convention: Convention::Signed, negative_control: false, moves: 8 }
    }
}

/// Runs every check on one graph. Later checks are skipped once a prerequisite fails.
pub fn validate_graph(subject: &str, g: &LabeledGraph, opts: ValidateOptions) -> Report {
    let mut r = Report { subject: subject.to_string(), checks: Vec::new() };
    let verdicts: Vec<Result<(), String>> =
        PuMethod::ALL.iter().map(|&m| is_pu(g, m).map_err(|c| c.describe(g))).collect();
    let agree = verdicts.iter().all(|v| v.is_ok() == verdicts[0].is_ok());
    let summary = PuMethod::ALL
        .iter()
        .zip(&verdicts)
        .map(|(m, v)| format!("{m} {}", if v.is_ok() { "yes" } else { "no" }))
        .collect::<Vec<_>>()
        .join(", ");
    r.push("pu-methods-agree", agree, summary);
    if !r.push("pu", verdicts[0].is_ok(), verdicts[0].clone().err().unwrap_or_default()) {
        return r;
    }
    let cube = match StateCube::new(g) {
        Ok(c) => c,
        Err(e @ CubeError::Torsion { .. }) => {
            r.push("freeness", false, e.to_string());
            return r;
        }
        Err(e @ CubeError::LemmaViolation { .. }) => {
            r.push("freeness", true, "");
            r.push("corank-lemma", false, e.to_string());
            return r;
        }
        Err(e) => {
            r.push("cube", false, e.to_string());
            return r;
        }
    };
    let n = g.n();
    r.push("freeness", true, format!("{} free state modules", 1u64 << n));
    if !cube_checks(&mut r, &cube) {
        return r;
    }
    let faces = match cube.faces(opts.convention) {
        Ok(f) => f,
        Err(e) => {
            r.push("face-classification", false, e.to_string());
            return r;
        }
    };
    r.push("face-classification", true, format!("A,C,X,Y = {:?}", faces.class_counts()));
    face_lemma(&mut r, &cube, &faces);
    let parity = validate_cube_parity(&faces);
    r.push(
        "cube-parity",
        parity.is_clean(),
        format!("{} violations in {} subcubes", parity.violations.len(), parity.cubes),
    );
    let mut assignments = Vec::new();
    for kind in [AssignmentKind::X, AssignmentKind::Y] {
        let name = if kind == AssignmentKind::X { "assignment-x" } else { "assignment-y" };
        match solve_edge_assignment(&cube, &faces, kind) {
            Ok(a) => {
                let dense = (n <= DENSE_LIMIT).then(|| solve_edge_assignment_dense(&cube, &faces, kind).is_ok());
                r.push(name, dense != Some(false), format!("{} negative edges", a.minus_count()));
                assignments.push(a);
            }
            Err(e) => {
                r.push(name, false, e.to_string());
            }
        }
    }
    if assignments.len() != 2 {
        return r;
    }
    let mut x = assignments[0].clone();
    if opts.negative_control {
        match corrupt(&cube, &faces, &x) {
            Some(bad) => x = bad,
            None => {
                r.push("negative-control", false, "no face with nonzero composites to corrupt");
            }
        }
    }
    let regauged = x.regauge(State::empty());
    let runs = [("X", &x), ("X regauged", &regauged), ("Y", &assignments[1])];
    let mut groups: Vec<BigradedGroups> = Vec::new();
    let mut consistent = (true, true);
    for (label, a) in runs {
        match build_complex(&cube, a) {
            Ok(c) => {
                let hz = integer_homology(&c);
                consistent.0 &= euler(&c) == euler_of(&hz);
                consistent.1 &= uct_check(&hz, &f2_homology(&c));
                groups.push(hz);
            }
            Err(e) => {
                r.push("d-squared", false, format!("{label}: {e}"));
                return r;
            }
        }
    }
    r.push("d-squared", true, "X, regauged X and Y complexes");
    r.push("euler", consistent.0, "");
    r.push("uct", consistent.1, "");
    let same = groups.iter().all(|h| *h == groups[0]);
    r.push("assignment-independence", same, "");
    move_invariance(&mut r, g, &groups[0], opts);
    r
}

/// Corank lemma in both directions and the edge-kind dichotomy.
fn cube_checks(r: &mut Report, cube: &StateCube) -> bool {
    let (g, n) = (cube.graph(), cube.n());
    let mut failures = Vec::new();
    for e in cube.edges() {
        let (i, s, t) = (e.coordinate, e.source, e.target);
        let here = cube.module(s).is_zero(i);
        let there = cube.module(t).is_zero(i);
        if here == there {
            failures.push(format!("x_{} at {}", g.name(i), g.format_state(s)));
        }
        let delta = cube.corank(t) as i64 - cube.corank(s) as i64;
        let expected = if e.kind == EdgeKind::Wedge { 1 } else { -1 };
        if delta != expected {
            failures.push(format!("{:?} edge {} changes corank by {delta}", e.kind, g.format_state(s)));
        }
    }
    let edges = if n == 0 { 0 } else { n << (n - 1) };
    r.push("corank-lemma", failures.is_empty(), with_failures(format!("{edges} edges"), &failures))
}

/// Zero faces have one inner and one outer coordinate vertex; type 5 faces have two of a kind.
fn face_lemma(r: &mut Report, cube: &StateCube, faces: &FaceTable) {
    let g = cube.graph();
    let bad = faces
        .iter()
        .filter(|&(_, i, j, f)| {
            let same = g.vertex(i).is_inner() == g.vertex(j).is_inner();
            (f.raw == 4 && same) || (f.raw == 5 && !same)
        })
        .count();
    r.push("inner-outer", bad == 0, format!("{bad} faces violate"));
}

/// Flips the sign of one edge of the first face whose composites are nonzero.
fn corrupt(cube: &StateCube, faces: &FaceTable, a: &EdgeAssignment) -> Option<EdgeAssignment> {
    let (y, i, _, _) = faces.iter().find(|(_, _, _, f)| f.raw != 4)?;
    Some(a.corrupted(cube.state(y), i))
}

fn move_invariance(r: &mut Report, g: &LabeledGraph, h: &BigradedGroups, opts: ValidateOptions) {
    let kh_opts = KhOptions { convention: opts.convention, ..KhOptions::default() };
    let mut seen = BTreeSet::new();
    let all = applicable_moves(g);
    let mut picked: Vec<_> = all.iter().filter(|m| seen.insert(m.kind())).cloned().collect();
    let rest: Vec<_> = all.iter().filter(|m| !picked.contains(m)).cloned().collect();
    picked.extend(rest);
    picked.truncate(opts.moves);
    let mut cases: Vec<(String, LabeledGraph)> = picked
        .into_iter()
        .map(|m| {
            let h2 = m.apply(g).expect("enumerated moves apply");
            (m.to_string(), h2)
        })
        .collect();
    if let Some((label, h2)) = macro_case(g) {
        cases.push((label, h2));
    }
    let results: Vec<(String, Result<BigradedGroups, HomologyError>)> =
        cases.into_par_iter().map(|(label, h2)| (label, khovanov(&h2, kh_opts))).collect();
    let mut failures = Vec::new();
    for (label, res) in &results {
        match res {
            Ok(h2) => {
                let cmp = align_and_compare(h, h2);
                if !cmp.is_equal() {
                    failures.push(format!("{label}: {cmp}"));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    r.push("move-invariance", failures.is_empty(), with_failures(format!("{} moves", results.len()), &failures));
}

fn with_failures(head: String, failures: &[String]) -> String {
    if failures.is_empty() {
        head
    } else {
        format!("{head}; {}", failures.join("; "))
    }
}

/// The edge-flip macro on the first edge whose reversal keeps the graph PU.
pub fn macro_case(g: &LabeledGraph) -> Option<(String, LabeledGraph)> {
    g.edges().into_iter().find_map(|(a, b)| {
        let (u, v) = (g.name(a), g.name(b));
        let (_, h) = flip_edge_macro(g, u, v).ok()?;
        is_pu(&h, PuMethod::MinorsB).ok()?;
        Some((format!("flip {u} {v}"), h))
    })
}

/// `k` random PU graphs with 2 to `n` vertices, reproducible from `seed`.
pub fn random_subjects(n: usize, k: usize, seed: u64) -> Vec<(String, LabeledGraph)> {
    let span = n.saturating_sub(1).max(1);
    (0..k)
        .map(|j| {
            let size = (2 + j % span).min(n);
            let s = seed.wrapping_mul(1_000_003).wrapping_add(j as u64);
            let g = random_pu_graph(size, 0.5, s).expect("random PU graph");
            (format!("random n={size} seed={s}"), g)
        })
        .collect()
}

/// Validates many graphs in parallel; reports keep the input order.
pub fn validate_many(subjects: &[(String, LabeledGraph)], opts: ValidateOptions) -> Vec<Report> {
    subjects.par_iter().map(|(name, g)| validate_graph(name, g, opts)).collect()
}
