//! Exhaustive minor enumeration.

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;

use super::det::det_i64;
use super::{det, IntMatrix};

/// A square submatrix (0-based row and column indices) and its determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: BigInt,
}

/// First minor whose value fails `valid`, enumerating by size ascending, then
/// row subset, then column subset (both lexicographic). Exponential in the size.
pub fn minors_all(m: &IntMatrix, valid: impl Fn(&BigInt) -> bool + Sync) -> Option<MinorWitness> {
    let small = m.to_i64();
    let eval = |rows: &[usize], cols: &[usize]| -> BigInt {
        match &small {
            Some(e) => {
                let k = rows.len();
                let mut sub = Vec::with_capacity(k * k);
                for &i in rows {
                    for &j in cols {
                        sub.push(e[i * m.cols() + j]);
                    }
                }
                det_i64(&sub, k)
            }
            None => det(&m.submatrix(rows, cols)).expect("square submatrix"),
        }
    };
    for size in 1..=m.rows().min(m.cols()) {
        let row_sets: Vec<Vec<usize>> = (0..m.rows()).combinations(size).collect();
        let col_sets: Vec<Vec<usize>> = (0..m.cols()).combinations(size).collect();
        let hit = row_sets.par_iter().find_map_first(|rows| {
            col_sets.iter().find_map(|cols| {
                let value = eval(rows, cols);
                (!valid(&value)).then(|| MinorWitness { rows: rows.clone(), cols: cols.clone(), value })
            })
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}
