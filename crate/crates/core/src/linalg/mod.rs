//! Exact integer and GF(2) linear algebra.

mod det;
mod exterior;
mod gf2;
mod matrix;
mod minors;
mod smith;
pub mod sparse;

pub use det::{det, rank};
pub use exterior::{wedge_expand, ExteriorElement};
pub use gf2::gf2_solve;
pub use matrix::IntMatrix;
pub use minors::{minors_all, MinorWitness};
pub use smith::{invariant_factors, quotient_projection, smith, QuotientProjection, SmithDecomposition};

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("quotient has torsion (invariant factor {0})")]
    TorsionDetected(BigInt),
    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,
}
