//! Dense GF(2) elimination over packed bit rows.

/// Solves `A x = b` over GF(2). Row `r` of `A` is given by the column indices of
/// its ones (repeats cancel). Free variables are set to 0.
pub fn gf2_solve(rows: &[Vec<usize>], ncols: usize, b: &[bool]) -> Option<Vec<bool>> {
    assert_eq!(rows.len(), b.len(), "right-hand side length mismatch");
    let words = ncols / 64 + 1;
    let rhs_bit = ncols;
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut w = vec![0u64; words];
            for &c in r {
                assert!(c < ncols, "column {c} out of range");
                w[c / 64] ^= 1 << (c % 64);
            }
            if bi {
                w[rhs_bit / 64] |= 1 << (rhs_bit % 64);
            }
            w
        })
        .collect();
    let get = |w: &[u64], c: usize| w[c / 64] >> (c % 64) & 1 == 1;
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..ncols {
        let Some(p) = (next..m.len()).find(|&r| get(&m[r], c)) else { continue };
        m.swap(next, p);
        let pivot = m[next].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != next && get(row, c) {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(c);
        next += 1;
    }
    if m[next..].iter().any(|row| get(row, rhs_bit)) {
        return None;
    }
    let mut x = vec![false; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = get(&m[r], rhs_bit);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_systems() {
        assert_eq!(gf2_solve(&[vec![0]], 1, &[true]), Some(vec![true]));
        assert_eq!(gf2_solve(&[vec![0, 1]], 2, &[true]), Some(vec![true, false]));
        assert_eq!(gf2_solve(&[vec![0], vec![0]], 1, &[true, false]), None);
        assert_eq!(gf2_solve(&[], 3, &[]), Some(vec![false; 3]));
    }

    proptest! {
        #[test]
        fn solution_satisfies_system(
            ncols in 1usize..130,
            rows in prop::collection::vec(prop::collection::vec(0usize..130, 0..6), 0..40),
            x in prop::collection::vec(any::<bool>(), 130),
        ) {
            let rows: Vec<Vec<usize>> = rows.into_iter().map(|r| r.into_iter().filter(|&c| c < ncols).collect()).collect();
            let eval = |x: &[bool], r: &[usize]| r.iter().fold(false, |acc, &c| acc ^ x[c]);
            let b: Vec<bool> = rows.iter().map(|r| eval(&x, r)).collect();
            let sol = gf2_solve(&rows, ncols, &b).expect("consistent by construction");
            for (r, &bi) in rows.iter().zip(&b) {
                prop_assert_eq!(eval(&sol, r), bi);
            }
        }
    }
}
