//! Realizable polymatroids: rank, closure and flats, the dual realization,
//! the partition of a finite dual space by flats, and coordinate bases for
//! tuples with a distributive lattice of flats.

mod distributive;
mod dual;
mod flats;

pub use distributive::{distributive_decomposition, DirectSumDecomposition, GENERATED_LATTICE_CAP};
pub use dual::{
    dual_partition, dual_partition_with_cap, dual_realization, DualPartition, DualRealization,
    DEFAULT_POINT_CAP,
};
pub use flats::{poly_rank, FlatLattice, Polymatroid};
