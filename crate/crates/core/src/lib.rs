//! Principal unimodularity, Reidemeister-type moves and integral reduced odd
//! Khovanov homology of bipartite graph-links.

pub mod graph;
pub mod linalg;
pub mod fixtures;
pub mod pu;
pub mod moves;
pub mod cube;
pub mod homology;
pub mod validate;
