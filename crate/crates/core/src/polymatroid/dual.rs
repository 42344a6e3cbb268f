use std::collections::BTreeMap;

use super::flats::Polymatroid;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::linalg::{Scalar, Subspace};
use crate::tuple::SubspaceTuple;

/// Default limit on the number of dual points enumerated.
pub const DEFAULT_POINT_CAP: u64 = 1_000_000;

/// The entrywise orthogonal complements, ranked by codimension of
/// intersections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualRealization {
    pub dual_tuple: SubspaceTuple,
    intersections: Vec<Subspace>,
}

impl DualRealization {
    /// `⋂_{i∈s} L_i^⊥`, the whole dual space for `s = ∅`.
    pub fn intersection(&self, s: IndexSet) -> &Subspace {
        &self.intersections[s.mask() as usize]
    }

    /// `d − dim ⋂_{i∈s} L_i^⊥`.
    pub fn rank(&self, s: IndexSet) -> usize {
        self.dual_tuple.ambient_dim() - self.intersection(s).dim()
    }

    pub fn polymatroid(&self) -> Result<Polymatroid> {
        Polymatroid::from_fn(self.dual_tuple.len(), |s| Ok(self.rank(s)))
    }
}

/// Builds the dual realization and checks that its codimension rank agrees
/// with the span rank of `t` on every subset.
pub fn dual_realization(t: &SubspaceTuple) -> Result<DualRealization> {
    let primal = Polymatroid::from_tuple(t)?;
    let entries = t.entries().iter().map(Subspace::orthogonal_complement).collect();
    let dual_tuple = SubspaceTuple::new(t.field(), t.ambient_dim(), entries)?;

    let n = t.len();
    let mut intersections = Vec::with_capacity(1 << n);
    intersections.push(Subspace::full(t.field(), t.ambient_dim()));
    for mask in 1u64..(1u64 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = &intersections[(mask & (mask - 1)) as usize];
        let next = rest.intersect(&dual_tuple.entries()[low])?;
        intersections.push(next);
    }
    let dual = DualRealization {
        dual_tuple,
        intersections,
    };
    if let Some(s) = t.ground().subsets().find(|&s| dual.rank(s) != primal.rank(s)) {
        return Err(Error::Verification(format!(
            "dual rank {} differs from rank {} on {s}",
            dual.rank(s),
            primal.rank(s)
        )));
    }
    Ok(dual)
}

/// The points of `GF(p)^d` grouped by the flat `γ(x) = {i : x ∈ L_i^⊥}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPartition {
    pub p: u64,
    pub dim: usize,
    /// Every flat appears as a key; blocks may be empty.
    pub blocks: BTreeMap<IndexSet, Vec<Vec<u64>>>,
    pub unassigned: usize,
}

impl DualPartition {
    pub fn total_points(&self) -> usize {
        self.blocks.values().map(Vec::len).sum::<usize>() + self.unassigned
    }

    pub fn block(&self, flat: IndexSet) -> Option<&[Vec<u64>]> {
        self.blocks.get(&flat).map(Vec::as_slice)
    }
}

pub fn dual_partition(t: &SubspaceTuple) -> Result<DualPartition> {
    dual_partition_with_cap(t, DEFAULT_POINT_CAP)
}

/// Enumerates the dual space, checks that every `γ(x)` is a flat, and checks
/// each block against `B_F = L_F^⊥ ∖ ⋃_{F' ⊄ F} L_{F'}^⊥`.
pub fn dual_partition_with_cap(t: &SubspaceTuple, cap: u64) -> Result<DualPartition> {
    let p = t.field().modulus().ok_or(Error::NotFiniteField)?;
    let d = t.ambient_dim();
    let points = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if points > u128::from(cap) {
        return Err(Error::PointCapExceeded { points, cap });
    }

    let poly = Polymatroid::from_tuple(t)?;
    let lattice = poly.flats();
    let dual = dual_realization(t)?;
    let primal_rows: Vec<Vec<Vec<u64>>> = t.entries().iter().map(|e| residue_rows(e.basis())).collect();
    let flat_spaces: Vec<(IndexSet, Reducer)> = lattice
        .flats
        .iter()
        .map(|&f| (f, Reducer::new(p, dual.intersection(f))))
        .collect();

    let mut blocks: BTreeMap<IndexSet, Vec<Vec<u64>>> =
        lattice.flats.iter().map(|&f| (f, Vec::new())).collect();
    let mut x = vec![0u64; d];
    for _ in 0..points {
        let gamma: IndexSet = primal_rows
            .iter()
            .enumerate()
            .filter(|(_, rows)| rows.iter().all(|v| dot(p, &x, v) == 0))
            .map(|(i, _)| i)
            .collect();
        let Some(block) = blocks.get_mut(&gamma) else {
            return Err(Error::Verification(format!(
                "point {x:?} annihilates {gamma}, which is not a flat"
            )));
        };
        for (f, space) in &flat_spaces {
            let excluded = flat_spaces
                .iter()
                .any(|(g, other)| !g.is_subset(*f) && other.contains(&x));
            let by_formula = space.contains(&x) && !excluded;
            if by_formula != (*f == gamma) {
                return Err(Error::Verification(format!(
                    "point {x:?}: block {gamma} disagrees with the formula for {f}"
                )));
            }
        }
        block.push(x.clone());
        increment(&mut x, p);
    }
    Ok(DualPartition {
        p,
        dim: d,
        blocks,
        unassigned: 0,
    })
}

fn residue_rows(rows: &[Vec<Scalar>]) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| match x {
                    Scalar::Residue(v) => *v,
                    Scalar::Rational(_) => unreachable!("finite field rows"),
                })
                .collect()
        })
        .collect()
}

fn dot(p: u64, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |acc, (x, y)| (acc + x * y % p) % p)
}

fn increment(x: &mut [u64], p: u64) {
    for c in x.iter_mut().rev() {
        *c += 1;
        if *c < p {
            return;
        }
        *c = 0;
    }
}

/// Membership in a subspace by elimination against its reduced basis.
struct Reducer {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Reducer {
    fn new(p: u64, s: &Subspace) -> Self {
        Reducer {
            p,
            rows: residue_rows(s.basis()),
            pivots: s.pivots().to_vec(),
        }
    }

    fn contains(&self, x: &[u64]) -> bool {
        let p = self.p;
        let mut v = x.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let k = v[c];
            if k != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = (*a + p - k * b % p) % p;
                }
            }
        }
        v.iter().all(|&a| a == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::linalg::FieldSpec;

    fn set(xs: &[usize]) -> IndexSet {
        xs.iter().copied().collect()
    }

    fn axes(f: FieldSpec) -> SubspaceTuple {
        SubspaceTuple::from_integer_rows(f, 2, &[vec![vec![1, 0]], vec![vec![0, 1]]]).unwrap()
    }

    #[test]
    fn dual_examples() {
        let f = FieldSpec::Rationals;
        let dual = dual_realization(&examples::ex1()).unwrap();
        let e2 = Subspace::from_integers(f, 2, &[vec![0, 1]]).unwrap();
        assert_eq!(dual.dual_tuple.entries(), &[e2.clone(), e2, Subspace::zero(f, 2)]);

        let t = SubspaceTuple::from_integer_rows(f, 3, &[vec![]]).unwrap();
        let dual = dual_realization(&t).unwrap();
        assert_eq!(dual.dual_tuple.entries()[0], Subspace::full(f, 3));

        let g = FieldSpec::prime(2).unwrap();
        let dual = dual_realization(&axes(g)).unwrap();
        let rows: Vec<_> = dual.dual_tuple.entries().iter().map(|e| e.integer_rows()).collect();
        assert_eq!(
            rows,
            vec![
                Subspace::from_integers(g, 2, &[vec![0, 1]]).unwrap().integer_rows(),
                Subspace::from_integers(g, 2, &[vec![1, 0]]).unwrap().integer_rows(),
            ]
        );
    }

    #[test]
    fn dual_polymatroid_matches() {
        for t in [examples::ex1(), examples::ex2(), examples::ex3(), examples::der1()] {
            let dual = dual_realization(&t).unwrap();
            assert_eq!(dual.polymatroid().unwrap(), Polymatroid::from_tuple(&t).unwrap());
        }
    }

    #[test]
    fn partition_of_axes() {
        let part = dual_partition(&axes(FieldSpec::prime(2).unwrap())).unwrap();
        assert_eq!(part.total_points(), 4);
        assert_eq!(part.block(set(&[0, 1])).unwrap(), &[vec![0, 0]]);
        assert_eq!(part.block(set(&[1])).unwrap(), &[vec![1, 0]]);
        assert_eq!(part.block(set(&[0])).unwrap(), &[vec![0, 1]]);
        assert_eq!(part.block(IndexSet::EMPTY).unwrap(), &[vec![1, 1]]);
    }

    #[test]
    fn partition_of_ex1_over_gf3() {
        let g = FieldSpec::prime(3).unwrap();
        let t = SubspaceTuple::from_integer_rows(
            g,
            2,
            &[vec![vec![1, 0]], vec![vec![1, 0]], vec![vec![1, 0], vec![0, 1]]],
        )
        .unwrap();
        let part = dual_partition(&t).unwrap();
        assert!(part.block(set(&[0, 1])).unwrap().contains(&vec![0, 1]));
        assert_eq!(part.block(set(&[0, 1, 2])).unwrap(), &[vec![0, 0]]);
        assert_eq!(part.block(set(&[0, 1])).unwrap().len(), 2);
        assert_eq!(part.block(IndexSet::EMPTY).unwrap().len(), 6);
        assert_eq!(part.total_points(), 9);
    }

    #[test]
    fn partition_errors() {
        assert_eq!(dual_partition(&examples::ex1()), Err(Error::NotFiniteField));
        let g = FieldSpec::prime(5).unwrap();
        let t = SubspaceTuple::from_integer_rows(g, 3, &[vec![vec![1, 0, 0]]]).unwrap();
        assert_eq!(
            dual_partition_with_cap(&t, 100),
            Err(Error::PointCapExceeded { points: 125, cap: 100 })
        );
        assert!(dual_partition_with_cap(&t, 125).is_ok());
    }
}
