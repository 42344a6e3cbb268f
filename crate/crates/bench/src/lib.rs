//! Fixtures shared by the criterion benches.

use minkowski_core::suite::{random_tuple, GenConfig};
use minkowski_core::{FieldSpec, SubspaceTuple};

pub const FIELDS: [(&str, FieldSpec); 2] = [
    ("gf2", FieldSpec::Prime(2)),
    ("rational", FieldSpec::Rationals),
];

/// The first generated tuple with exactly `n` subspaces of a `dim`-dimensional space.
pub fn random(field: FieldSpec, dim: usize, n: usize) -> SubspaceTuple {
    let cfg = GenConfig::new(field, dim, n, 0xB0BA, 1);
    (0..)
        .map(|case| random_tuple(&cfg, case))
        .find(|t| t.len() == n && t.ambient_dim() == dim)
        .expect("generator eventually hits the maxima")
}
