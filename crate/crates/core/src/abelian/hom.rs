use num_bigint::BigInt;

use super::group::{lattice_quotient, FinAbGroup, PresentedGroup};
use super::lattice::{left_kernel, Lattice};
use super::matrix::IntMatrix;
use super::AbelianError;

/// A homomorphism between presented groups. Row `i` of `matrix` is the image
/// of source generator `i` in target generator coordinates.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: PresentedGroup,
    target: PresentedGroup,
    matrix: IntMatrix,
}

/// A subgroup given both as a canonical group and by generating vectors in
/// the ambient group's generator coordinates.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FinAbGroup,
    pub generators: Vec<Vec<BigInt>>,
}

impl GroupHom {
    /// Checks that every source relation maps into the target relation lattice.
    pub fn new(
        source: PresentedGroup,
        target: PresentedGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AbelianError> {
        if matrix.rows() != source.num_generators() || matrix.cols() != target.num_generators() {
            return Err(AbelianError::ShapeMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                source_gens: source.num_generators(),
                target_gens: target.num_generators(),
            });
        }
        let rels = source.relations();
        for r in 0..rels.rows() {
            let image = matrix.left_apply(rels.row(r));
            if !target.is_zero(&image)? {
                return Err(AbelianError::IllDefined {
                    relation: r,
                    image: image
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                });
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn source(&self) -> &PresentedGroup {
        &self.source
    }

    pub fn target(&self) -> &PresentedGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>, AbelianError> {
        if x.len() != self.source.num_generators() {
            return Err(AbelianError::DimensionMismatch {
                expected: self.source.num_generators(),
                found: x.len(),
            });
        }
        Ok(self.matrix.left_apply(x))
    }

    fn image_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.matrix.rows())
            .map(|r| self.matrix.row_vec(r))
            .collect()
    }

    pub fn image(&self) -> FinAbGroup {
        self.target
            .subgroup(&self.image_rows())
            .expect("image rows have target width")
    }

    pub fn cokernel(&self) -> FinAbGroup {
        self.target
            .quotient(&self.image_rows())
            .expect("image rows have target width")
            .canonical()
            .clone()
    }

    pub fn kernel(&self) -> FinAbGroup {
        self.kernel_subgroup().group
    }

    /// Kernel with a generating set in source coordinates.
    pub fn kernel_subgroup(&self) -> Subgroup {
        let s = self.source.num_generators();
        // Left kernel of [H; R_target]: pairs (x, y) with x·H + y·R_t = 0.
        let stacked = self.matrix.vstack(self.target.relations());
        let preimage: Vec<Vec<BigInt>> = left_kernel(&stacked)
            .into_iter()
            .map(|v| v[..s].to_vec())
            .collect();
        let source_rels: Vec<Vec<BigInt>> = (0..self.source.relations().rows())
            .map(|r| self.source.relations().row_vec(r))
            .collect();
        let mut rows = preimage;
        rows.extend(source_rels.iter().cloned());
        let lattice = Lattice::span(s, &IntMatrix::from_big_rows(s, &rows));
        let group = lattice_quotient(&lattice, &source_rels);
        let generators = lattice
            .basis()
            .iter()
            .filter(|b| {
                !self
                    .source
                    .is_zero(b)
                    .expect("basis rows have source width")
            })
            .cloned()
            .collect();
        Subgroup { group, generators }
    }
}
