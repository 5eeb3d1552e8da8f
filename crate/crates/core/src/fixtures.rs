//! Small graphs shipped with the crate, embedded at compile time.

use crate::graph::LabeledGraph;

pub const UNKNOT_NEG: &str = include_str!("../fixtures/unknot_neg.graph");
pub const UNKNOT_POS: &str = include_str!("../fixtures/unknot_pos.graph");
pub const E1: &str = include_str!("../fixtures/e1.graph");
pub const EVEN4: &str = include_str!("../fixtures/even4.graph");
pub const ODD4: &str = include_str!("../fixtures/odd4.graph");
pub const OM3: &str = include_str!("../fixtures/om3.graph");
pub const THETA11: &str = include_str!("../fixtures/theta11.graph");

/// Every fixture by name, in a fixed order.
pub const ALL: &[(&str, &str)] = &[
    ("UNKNOT_NEG", UNKNOT_NEG),
    ("UNKNOT_POS", UNKNOT_POS),
    ("E1", E1),
    ("EVEN4", EVEN4),
    ("ODD4", ODD4),
    ("OM3", OM3),
    ("THETA11", THETA11),
];

/// Parses a fixture; the embedded files are known to be valid.
pub fn graph(text: &str) -> LabeledGraph {
    LabeledGraph::parse(text).expect("embedded fixture parses")
}

pub fn by_name(name: &str) -> Option<LabeledGraph> {
    ALL.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, t)| graph(t))
}
