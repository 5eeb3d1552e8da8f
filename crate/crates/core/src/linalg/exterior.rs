//! Elements of the exterior algebra of a free module of rank at most 32.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use super::LinalgError;

/// Homogeneous element of `Λ^degree Z^rank`. Basis monomials are keyed by the
/// bitmask of their (increasing) index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorElement {
    rank: usize,
    degree: usize,
    coeffs: BTreeMap<u32, i64>,
}

impl ExteriorElement {
    pub fn zero(rank: usize, degree: usize) -> Self {
        assert!(rank <= 32, "exterior rank {rank} exceeds 32");
        Self { rank, degree, coeffs: BTreeMap::new() }
    }

    /// The empty wedge, `1 ∈ Λ^0`.
    pub fn one(rank: usize) -> Self {
        let mut e = Self::zero(rank, 0);
        e.coeffs.insert(0, 1);
        e
    }

    pub fn monomial(rank: usize, mask: u32) -> Self {
        let mut e = Self::zero(rank, mask.count_ones() as usize);
        e.coeffs.insert(mask, 1);
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, mask: u32) -> i64 {
        self.coeffs.get(&mask).copied().unwrap_or(0)
    }

    /// Nonzero terms as `(bitmask, coefficient)` in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    /// Nonzero terms with explicit 0-based index tuples.
    pub fn tuples(&self) -> Vec<(Vec<usize>, i64)> {
        self.terms().map(|(m, c)| ((0..self.rank).filter(|&i| m >> i & 1 == 1).collect(), c)).collect()
    }

    fn add_term(&mut self, mask: u32, c: i64) -> Result<(), LinalgError> {
        if c == 0 {
            return Ok(());
        }
        let e = self.coeffs.entry(mask).or_insert(0);
        *e = e.checked_add(c).ok_or(LinalgError::Overflow)?;
        if *e == 0 {
            self.coeffs.remove(&mask);
        }
        Ok(())
    }

    /// `self ∧ v` for a vector `v` of length `rank`.
    pub fn wedge_vector(&self, v: &[i64]) -> Result<Self, LinalgError> {
        assert_eq!(v.len(), self.rank, "vector length does not match exterior rank");
        let mut out = Self::zero(self.rank, self.degree + 1);
        for (&mask, &c) in &self.coeffs {
            for (j, &x) in v.iter().enumerate() {
                if x == 0 || mask >> j & 1 == 1 {
                    continue;
                }
                let above = (mask >> j).count_ones();
                let mut t = c.checked_mul(x).ok_or(LinalgError::Overflow)?;
                if above % 2 == 1 {
                    t = -t;
                }
                out.add_term(mask | 1 << j, t)?;
            }
        }
        Ok(out)
    }

    /// `self + f * other`.
    pub fn add_scaled(&mut self, other: &Self, f: i64) -> Result<(), LinalgError> {
        assert_eq!((self.rank, self.degree), (other.rank, other.degree), "mismatched exterior powers");
        for (&m, &c) in &other.coeffs {
            self.add_term(m, c.checked_mul(f).ok_or(LinalgError::Overflow)?)?;
        }
        Ok(())
    }

    pub fn negated(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&m, &c)| (m, -c)).collect(), ..self.clone() }
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let body = self
            .tuples()
            .into_iter()
            .map(|(t, c)| format!("<{}>:{c}", t.iter().map(|i| i + 1).join(",")))
            .join(", ");
        write!(f, "{{{body}}}")
    }
}

/// Multilinear expansion of `v_1 ∧ … ∧ v_m` in `Λ^m Z^k`. The coefficient of the
/// monomial on index set `T` is the minor of the stacked vectors on columns `T`.
pub fn wedge_expand(k: usize, vectors: &[Vec<i64>]) -> Result<ExteriorElement, LinalgError> {
    vectors.iter().try_fold(ExteriorElement::one(k), |acc, v| acc.wedge_vector(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det, IntMatrix};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let e = wedge_expand(2, &[vec![1, 0]]).unwrap();
        assert_eq!(e.tuples(), vec![(vec![0], 1)]);
        assert!(wedge_expand(2, &[vec![1, 1], vec![1, 1]]).unwrap().is_zero());
        let e = wedge_expand(3, &[vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(e.tuples(), vec![(vec![0, 1], 1), (vec![0, 2], 1)]);
        assert_eq!(e.to_string(), "{<1,2>:1, <1,3>:1}");
    }

    #[test]
    fn reversed_basis_pair_is_negative() {
        let e = wedge_expand(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(e.coeff(0b11), -1);
    }

    #[test]
    fn overflow_is_reported() {
        let r = wedge_expand(2, &[vec![i64::MAX, 0], vec![0, 2]]);
        assert_eq!(r, Err(LinalgError::Overflow));
    }

    fn vectors(k: usize, m: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, k), m)
    }

    proptest! {
        #[test]
        fn coefficients_are_minors((k, vs) in (1usize..6).prop_flat_map(|k| (Just(k), (0..=k).prop_flat_map(move |m| vectors(k, m))))) {
            let e = wedge_expand(k, &vs).unwrap();
            let m = vs.len();
            let stacked = IntMatrix::from_rows(vs.clone());
            for cols in (0..k).combinations(m) {
                let mask = cols.iter().fold(0u32, |a, &c| a | 1 << c);
                let rows: Vec<usize> = (0..m).collect();
                let minor = det(&stacked.submatrix(&rows, &cols)).unwrap();
                prop_assert_eq!(BigInt::from(e.coeff(mask)), minor);
            }
        }

        #[test]
        fn swapping_inputs_negates((k, vs, a, b) in (2usize..6).prop_flat_map(|k| (Just(k), vectors(k, 3), 0usize..3, 0usize..3))) {
            prop_assume!(a != b);
            let mut swapped = vs.clone();
            swapped.swap(a, b);
            prop_assert_eq!(wedge_expand(k, &swapped).unwrap(), wedge_expand(k, &vs).unwrap().negated());
        }
    }
}
