//! Integer row lattices: bases, membership, coordinates, left kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::smith::smith_normal_form;

/// A full-rank basis of the row span of some generating set, kept together
/// with the data needed to write span members in that basis.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    /// Basis rows `d_i · w_i`, where `w_i` is row i of `V⁻¹`.
    basis: Vec<Vec<BigInt>>,
    diag: Vec<BigInt>,
    v: IntMatrix,
}

impl Lattice {
    /// Row span of `gens` (each of length `dim`).
    pub fn span(dim: usize, gens: &IntMatrix) -> Self {
        assert_eq!(gens.cols(), dim);
        let s = smith_normal_form(gens);
        let diag: Vec<BigInt> = s.diagonal().into_iter().filter(|d| !d.is_zero()).collect();
        let r = diag.len();
        // U·G = D·V⁻¹, so the first r rows of U·G are d_i · (row i of V⁻¹).
        let ug = &s.u * gens;
        let basis = (0..r).map(|i| ug.row_vec(i)).collect();
        Lattice {
            dim,
            basis,
            diag,
            v: s.v,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_big_rows(self.dim, &self.basis)
    }

    /// Coefficients of `x` in the basis, or `None` if `x` is not in the lattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.dim);
        let y = self.v.left_apply(x);
        let r = self.rank();
        if y[r..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(r);
        for (c, d) in y.iter().zip(&self.diag) {
            let (q, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).is_some()
    }
}

/// Basis of `{x : x · m = 0}` (the integer left kernel of `m`).
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(m);
    let r = s.rank();
    (r..m.rows()).map(|i| s.u.row_vec(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn membership() {
        let l = Lattice::span(2, &IntMatrix::from_rows(2, &[[2, 0], [0, 4], [2, 4]]));
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&big(&[4, 8])));
        assert!(!l.contains(&big(&[1, 0])));
        assert!(!l.contains(&big(&[0, 2])));
    }

    #[test]
    fn coordinates_reconstruct() {
        let l = Lattice::span(3, &IntMatrix::from_rows(3, &[[1, 2, 3], [0, 3, 6]]));
        let x = big(&[2, 7, 12]);
        let c = l.coordinates(&x).expect("member");
        let back = l.basis_matrix().left_apply(&c);
        assert_eq!(back, x);
    }

    #[test]
    fn kernel_of_column() {
        let m = IntMatrix::from_rows(1, &[[2], [3]]);
        let k = left_kernel(&m);
        assert_eq!(k.len(), 1);
        assert!(m.left_apply(&k[0]).iter().all(Zero::is_zero));
    }
}
