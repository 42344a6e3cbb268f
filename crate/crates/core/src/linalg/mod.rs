//! Exact linear algebra over Q and GF(p): canonical subspaces, sums,
//! intersections, quotients and annihilators.

mod field;
mod subspace;

pub use field::{FieldSpec, Scalar, MAX_MODULUS};
pub use subspace::{apply, invert, rank, rref, Matrix, QuotientContext, Subspace, Vector};
pub(crate) use subspace::unit;
