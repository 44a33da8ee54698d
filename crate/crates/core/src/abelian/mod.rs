//! Exact calculus of finitely generated abelian groups over arbitrary-precision integers.

mod group;
mod hom;
mod lattice;
mod matrix;
mod smith;

pub use group::{
    direct_sum, direct_sum_all, group_from_presentation, primary_decomposition, prime_factors,
    FinAbGroup, Order, PresentedGroup, PrimaryDecomposition,
};
pub use hom::{GroupHom, Subgroup};
pub use lattice::{left_kernel, Lattice};
pub use matrix::IntMatrix;
pub use smith::{smith_normal_form, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("vector has {found} coordinates, group has {expected} generators")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(
        "matrix is {rows}x{cols} but source/target have {source_gens}/{target_gens} generators"
    )]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        source_gens: usize,
        target_gens: usize,
    },
    #[error("homomorphism is not well defined: source relation {relation} maps to ({image}), which is nonzero")]
    IllDefined { relation: usize, image: String },
    #[error("operation needs a finite group")]
    InfiniteGroup,
}
