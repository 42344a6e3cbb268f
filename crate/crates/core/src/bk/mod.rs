//! Lattices of BK-subtuples, their Birkhoff posets, poset-indexed
//! decompositions, filtrations and poset realization.

mod decompose;
mod lattice;
mod poset;
mod realize;

pub use decompose::{
    bk_decomposition, coordinate_basis, maximal_bk_filtration, require_bk, BkDecomposition,
    CoordinateBasis, Filtration,
};
pub use lattice::{birkhoff, birkhoff_poset, bk_sublattice, covering_pairs, Birkhoff, LatticeOfSets};
pub use poset::Poset;
pub use realize::realize_poset;

pub(crate) use decompose::{decomposition_from_table, filtration_from};
