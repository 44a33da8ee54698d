//! Smith normal form over the integers with transformation matrices.
//!
//! `smith_normal_form(m)` returns unimodular `u`, `v` and diagonal `d` with
//! `u · m · v = d`, nonnegative diagonal, and `d[i][i] | d[i+1][i+1]` for every
//! nonzero successor. The pivot is always the nonzero entry of smallest
//! absolute value in the active block, ties going to the lowest (row, col),
//! so the transforms are reproducible for a given input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `d` (length `min(rows, cols)`), zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let x = a.get(r, c);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if a.get(br, bc).abs() <= x.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = find_pivot(&a, t) else {
                return SmithDecomposition { u, d: a, v };
            };
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = a.get(t, t).clone();
            let mut dirty = false;
            for r in t + 1..rows {
                if a.get(r, t).is_zero() {
                    continue;
                }
                let q = -a.get(r, t).div_floor(&pivot);
                a.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                dirty |= !a.get(r, t).is_zero();
            }
            for c in t + 1..cols {
                if a.get(t, c).is_zero() {
                    continue;
                }
                let q = -a.get(t, c).div_floor(&pivot);
                a.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                dirty |= !a.get(t, c).is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column t are clear; the pivot must divide the rest of the block.
            let offender =
                (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !a.get(r, c).is_multiple_of(&pivot)));
            match offender {
                Some(r) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d: a, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if !w[1].is_zero() {
                assert!(!w[0].is_zero());
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMatrix::identity(2);
        let s = check(&m);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn two_four_six_eight() {
        let m = IntMatrix::from_rows(2, &[[2, 4], [6, 8]]);
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zeros(3, 2);
        let s = check(&m);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn empty_matrices() {
        check(&IntMatrix::zeros(0, 0));
        check(&IntMatrix::zeros(0, 4));
        let s = check(&IntMatrix::zeros(3, 0));
        assert_eq!(s.u.rows(), 3);
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) is not in normal form; expect diag(1, 6).
        let m = IntMatrix::from_rows(2, &[[2, 0], [0, 3]]);
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn deterministic() {
        let m = IntMatrix::from_rows(3, &[[4, -6, 2], [10, 3, -7], [0, 5, 5]]);
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
        check(&m);
    }
}
