//! Homology over GF(p) by sparse column reduction: Betti numbers, cycle
//! bases, kernels of maps induced by inclusions, and the rank identities
//! relating nested and glued complexes.

mod basis;
mod betti;
mod boundary;
mod field;
mod maps;
mod sparse;

pub use basis::{homology_basis, verify_basis, HomologyBasis};
pub use betti::{betti_numbers, euler_characteristic, BettiVector};
pub use boundary::{boundary_matrix, BoundaryMatrix};
pub use field::FieldSpec;
pub use maps::{
    betti_difference_bound_check, induced_map_kernel_rank, mayer_vietoris_terms, BettiBoundCheck, MayerVietorisTerms,
};
pub use sparse::{rank_of_columns, SparseCol};

pub(crate) use betti::UnionFind;
pub(crate) use boundary::boundary_column;
pub(crate) use sparse::ColumnReducer;
