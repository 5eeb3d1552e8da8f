//! Fraction-free (Bareiss) elimination. Runs in checked `i128` first and
//! repeats in `BigInt` only if an intermediate value overflows.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{IntMatrix, LinalgError};

pub(crate) trait Exact: Clone {
    fn exact_zero() -> Self;
    fn exact_one() -> Self;
    fn exact_is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    /// `(a*b - c*d) / p`, exact by construction.
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, p: &Self) -> Option<Self>;
}

impl Exact for i128 {
    fn exact_zero() -> Self {
        0
    }
    fn exact_one() -> Self {
        1
    }
    fn exact_is_zero(&self) -> bool {
        *self == 0
    }
    fn neg(&self) -> Self {
        -self
    }
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, p: &Self) -> Option<Self> {
        let x = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        Some(x / p)
    }
}

impl Exact for BigInt {
    fn exact_zero() -> Self {
        Zero::zero()
    }
    fn exact_one() -> Self {
        One::one()
    }
    fn exact_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self, p: &Self) -> Option<Self> {
        Some((a * b - c * d) / p)
    }
}

/// Returns `(rank, det)`; `det` is only meaningful for square input.
pub(crate) fn bareiss<T: Exact>(mut a: Vec<T>, rows: usize, cols: usize) -> Option<(usize, T)> {
    let mut prev = T::exact_one();
    let mut r = 0;
    let mut negate = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&p| !a[p * cols + c].exact_is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
            negate = !negate;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = T::cross(&a[r * cols + c], &a[i * cols + j], &a[i * cols + c], &a[r * cols + j], &prev)?;
                a[i * cols + j] = v;
            }
            a[i * cols + c] = T::exact_zero();
        }
        prev = a[r * cols + c].clone();
        r += 1;
    }
    let det = if rows == cols && r == rows {
        if negate {
            prev.neg()
        } else {
            prev
        }
    } else {
        T::exact_zero()
    };
    Some((r, det))
}

fn eliminate(m: &IntMatrix) -> (usize, BigInt) {
    let small: Option<Vec<i128>> = m.data().iter().map(ToPrimitive::to_i128).collect();
    if let Some(small) = small {
        if let Some((r, d)) = bareiss(small, m.rows(), m.cols()) {
            return (r, BigInt::from(d));
        }
    }
    bareiss(m.data().to_vec(), m.rows(), m.cols()).expect("BigInt elimination cannot overflow")
}

/// Small-matrix determinant over `i64` entries, exact.
pub(crate) fn det_i64(entries: &[i64], n: usize) -> BigInt {
    let small: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    match bareiss(small, n, n) {
        Some((_, d)) => BigInt::from(d),
        None => {
            let big: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
            bareiss(big, n, n).expect("BigInt elimination cannot overflow").1
        }
    }
}

/// Exact determinant.
pub fn det(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    if m.rows() == 0 {
        return Ok(BigInt::from(1));
    }
    Ok(eliminate(m).1)
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    eliminate(m).0
}
