//! Minkowski matroids of subspace tuples, BK-tuples and their Birkhoff
//! posets, and realizable polymatroids, all in exact arithmetic.

pub mod bk;
pub mod error;
pub mod examples;
pub mod index_set;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod polymatroid;
pub mod suite;
pub mod tuple;

pub use error::{Error, Result};
pub use index_set::IndexSet;
pub use linalg::{FieldSpec, QuotientContext, Scalar, Subspace};
pub use tuple::{
    set_subset_cap, subset_cap, DefectTable, SubspaceTuple, TupleClass, DEFAULT_SUBSET_CAP,
};
pub use matroid::{BasisCore, Contraction, MinkowskiMatroid, Witness};
pub use polymatroid::{FlatLattice, Polymatroid};
pub use suite::{GenConfig, SuiteReport};
