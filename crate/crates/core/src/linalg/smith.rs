//! Smith normal form with unimodular transformation certificates.
//!
//! Pivot rule: smallest nonzero absolute value in the remaining block, ties broken
//! by lowest row, then lowest column. The result is a deterministic function of
//! the input matrix.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use super::{det, IntMatrix, LinalgError};

/// `u * m * v = d` with `u`, `v` unimodular; `v_inv` is the inverse of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Diagonal of `d`, length `min(rows, cols)`; nonzero entries form a divisibility
    /// chain and precede the zeros.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn d(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.diagonal.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    /// Invariant factors different from 1 (the nonzero part of the diagonal).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal[..self.rank].iter().filter(|x| !x.is_one()).cloned().collect()
    }
}

struct Reducer {
    m: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(a, b);
        }
    }

    /// `row[dst] += f * row[src]`
    fn row_op(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.m.add_row_multiple(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, f);
        }
    }

    /// `col[dst] += f * col[src]`
    fn col_op(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.m.add_col_multiple(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, f);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(src, dst, &-f);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.m.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let x = self.m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.m.get(bi, bj).magnitude() <= x.magnitude() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let (rows, cols) = (self.m.rows(), self.m.cols());
        let mut rank = 0;
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.pivot(t) else { return rank };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.m.get(t, t).clone();
                let mut clean = true;
                for i in t + 1..rows {
                    if self.m.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.m.get(i, t) / &p;
                    self.row_op(i, t, &-q);
                    clean &= self.m.get(i, t).is_zero();
                }
                for j in t + 1..cols {
                    if self.m.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.m.get(t, j) / &p;
                    self.col_op(j, t, &-q);
                    clean &= self.m.get(t, j).is_zero();
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !(self.m.get(i, j) % &p).is_zero())
                });
                match offender {
                    Some(i) => self.row_op(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.m.get(t, t).sign() == Sign::Minus {
                self.negate_row(t);
            }
            rank += 1;
        }
        rank
    }
}

/// Smith normal form of `m` with transformation matrices.
pub fn smith(m: &IntMatrix) -> SmithDecomposition {
    let mut r = Reducer {
        m: m.clone(),
        u: Some(IntMatrix::identity(m.rows())),
        v: Some(IntMatrix::identity(m.cols())),
        v_inv: Some(IntMatrix::identity(m.cols())),
    };
    let rank = r.run();
    let diagonal = (0..m.rows().min(m.cols())).map(|i| r.m.get(i, i).clone()).collect();
    let out = SmithDecomposition {
        u: r.u.take().unwrap(),
        v: r.v.take().unwrap(),
        v_inv: r.v_inv.take().unwrap(),
        diagonal,
        rank,
    };
    if cfg!(debug_assertions) {
        assert_eq!(out.u.mul(m).mul(&out.v), out.d(), "U*M*V != D");
        assert_eq!(out.v.mul(&out.v_inv), IntMatrix::identity(m.cols()), "V*V^-1 != I");
        assert!(det(&out.u).unwrap().abs().is_one(), "U not unimodular");
    }
    out
}

/// Nonzero invariant factors of `m`, in divisibility order.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut r = Reducer { m: m.clone(), u: None, v: None, v_inv: None };
    let rank = r.run();
    (0..rank).map(|i| r.m.get(i, i).clone()).collect()
}

/// Free quotient `Z^n / rowspace(R)` presented by a projection and a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientProjection {
    pub rank: usize,
    /// `k x n`, surjective, annihilates every row of `R`.
    pub projection: IntMatrix,
    /// `n x k`, with `projection * section = I_k`.
    pub section: IntMatrix,
}

/// Presents the quotient of `Z^n` (`n = R.cols()`) by the row space of `R`.
/// Fails with `TorsionDetected` if some nonzero invariant factor is not 1.
pub fn quotient_projection(r: &IntMatrix) -> Result<QuotientProjection, LinalgError> {
    let n = r.cols();
    let snf = smith(r);
    if let Some(f) = snf.torsion().into_iter().next() {
        return Err(LinalgError::TorsionDetected(f));
    }
    let k = n - snf.rank;
    let projection = IntMatrix::from_big(
        k,
        n,
        (0..k).flat_map(|a| (0..n).map(move |j| (a, j))).map(|(a, j)| snf.v.get(j, snf.rank + a).clone()).collect(),
    );
    let section = IntMatrix::from_big(
        n,
        k,
        (0..n).flat_map(|j| (0..k).map(move |a| (j, a))).map(|(j, a)| snf.v_inv.get(snf.rank + a, j).clone()).collect(),
    );
    assert!(projection.mul(&r.transpose()).is_zero(), "projection does not annihilate relations");
    assert_eq!(projection.mul(&section), IntMatrix::identity(k), "projection * section != I");
    Ok(QuotientProjection { rank: k, projection, section })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diag_2_3() {
        let s = smith(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, ints(&[1, 6]));
        assert_eq!(s.torsion(), ints(&[6]));
    }

    #[test]
    fn zero_and_unit_matrices() {
        let s = smith(&IntMatrix::zeros(2, 3));
        assert_eq!(s.rank, 0);
        assert_eq!(s.diagonal, ints(&[0, 0]));
        let s = smith(&mat(&[&[0, 1], &[-1, 0]]));
        assert_eq!(s.diagonal, ints(&[1, 1]));
    }

    #[test]
    fn divisibility_chain_from_non_divisible_pivot() {
        let s = smith(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.diagonal, ints(&[2, 6, 12]));
        assert_eq!(invariant_factors(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), ints(&[2, 6, 12]));
    }

    #[test]
    fn quotient_of_coordinate_relation() {
        let q = quotient_projection(&mat(&[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(q.rank, 1);
        assert!(q.projection.get(0, 0).is_zero());
        assert!(q.projection.get(0, 1).abs().is_one());
        assert!(q.section.get(0, 0).is_zero());
        assert!(q.section.get(1, 0).abs().is_one());
    }

    #[test]
    fn quotient_of_single_edge_state() {
        // rows (0,0) and (-1,1): x_v - x_u = 0
        let q = quotient_projection(&mat(&[&[0, 0], &[-1, 1]])).unwrap();
        assert_eq!(q.rank, 1);
        assert_eq!(q.projection.get(0, 0), q.projection.get(0, 1));
        assert!(q.projection.get(0, 0).abs().is_one());
    }

    #[test]
    fn quotient_rejects_torsion() {
        assert_eq!(quotient_projection(&mat(&[&[2, 0], &[0, 1]])), Err(LinalgError::TorsionDetected(BigInt::from(2))));
    }

    #[test]
    fn quotient_rank_is_corank() {
        let q = quotient_projection(&IntMatrix::zeros(0, 3)).unwrap();
        assert_eq!(q.rank, 3);
        assert_eq!(q.projection, IntMatrix::identity(3));
    }
}
