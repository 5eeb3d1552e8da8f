//! Sparse integer matrices for chain complexes.
//!
//! Entries are `i64` with checked arithmetic. Invariant factors are computed by
//! eliminating unit pivots in place; whatever remains (or the whole matrix, if an
//! intermediate value overflows) is finished by the dense Smith reduction.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{invariant_factors, IntMatrix, LinalgError};

/// Column-major sparse matrix; each column is sorted by row with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self, LinalgError> {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            let e = acc[c].entry(r).or_insert(0);
            *e = e.checked_add(v).ok_or(LinalgError::Overflow)?;
        }
        let columns = acc.into_iter().map(|col| col.into_iter().filter(|&(_, v)| v != 0).collect()).collect();
        Ok(Self { rows, cols, columns })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j].binary_search_by_key(&i, |&(r, _)| r).map_or(0, |k| self.columns[j][k].1)
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut triplets = Vec::new();
        for (j, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    let e = acc.entry(i).or_insert(0);
                    *e = a.checked_mul(b).and_then(|p| e.checked_add(p)).ok_or(LinalgError::Overflow)?;
                }
            }
            triplets.extend(acc.into_iter().map(|(i, v)| (i, j, v)));
        }
        Self::from_triplets(self.rows, other.cols, triplets)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Nonzero invariant factors in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut w = Work::new(self, false);
        match w.eliminate() {
            Ok(units) => {
                let mut out = vec![BigInt::from(1); units];
                out.extend(invariant_factors(&w.remainder()));
                out
            }
            Err(_) => invariant_factors(&self.to_dense()),
        }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Rank over GF(2).
    pub fn rank_mod2(&self) -> usize {
        let mut w = Work::new(self, true);
        w.eliminate().expect("arithmetic mod 2 cannot overflow")
    }
}

struct Work {
    cols: Vec<BTreeMap<usize, i64>>,
    rows: Vec<BTreeSet<usize>>,
    mod2: bool,
}

impl Work {
    fn new(m: &SparseMatrix, mod2: bool) -> Self {
        let mut cols = vec![BTreeMap::new(); m.cols];
        let mut rows = vec![BTreeSet::new(); m.rows];
        for (j, col) in m.columns.iter().enumerate() {
            for &(i, v) in col {
                let v = if mod2 { v.rem_euclid(2) } else { v };
                if v != 0 {
                    cols[j].insert(i, v);
                    rows[i].insert(j);
                }
            }
        }
        Self { cols, rows, mod2 }
    }

    /// Eliminates unit pivots until none remain; returns how many were used.
    fn eliminate(&mut self) -> Result<usize, LinalgError> {
        let mut units = 0;
        let mut progress = true;
        while progress {
            progress = false;
            for c in 0..self.cols.len() {
                let best = self.cols[c]
                    .iter()
                    .filter(|(_, v)| v.abs() == 1)
                    .min_by_key(|&(&r, _)| (self.rows[r].len(), r))
                    .map(|(&r, &v)| (r, v));
                if let Some((r, p)) = best {
                    self.pivot(r, c, p)?;
                    units += 1;
                    progress = true;
                }
            }
        }
        Ok(units)
    }

    fn pivot(&mut self, r: usize, c: usize, p: i64) -> Result<(), LinalgError> {
        let pcol: Vec<(usize, i64)> = self.cols[c].iter().map(|(&i, &v)| (i, v)).collect();
        let targets: Vec<usize> = self.rows[r].iter().copied().filter(|&j| j != c).collect();
        for j in targets {
            let f = self.cols[j][&r] * p;
            for &(i, v) in &pcol {
                let old = self.cols[j].get(&i).copied().unwrap_or(0);
                let mut new = f.checked_mul(v).and_then(|d| old.checked_sub(d)).ok_or(LinalgError::Overflow)?;
                if self.mod2 {
                    new = new.rem_euclid(2);
                }
                if new == 0 {
                    self.cols[j].remove(&i);
                    self.rows[i].remove(&j);
                } else {
                    self.cols[j].insert(i, new);
                    self.rows[i].insert(j);
                }
            }
        }
        for &(i, _) in &pcol {
            self.rows[i].remove(&c);
        }
        self.cols[c].clear();
        Ok(())
    }

    fn remainder(&self) -> IntMatrix {
        let live_cols: Vec<usize> = (0..self.cols.len()).filter(|&j| !self.cols[j].is_empty()).collect();
        let live_rows: Vec<usize> = (0..self.rows.len()).filter(|&i| !self.rows[i].is_empty()).collect();
        let mut m = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (b, &j) in live_cols.iter().enumerate() {
            for (&i, &v) in &self.cols[j] {
                let a = live_rows.binary_search(&i).expect("live row");
                m.set(a, b, BigInt::from(v));
            }
        }
        m
    }
}
