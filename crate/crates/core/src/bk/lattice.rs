use std::collections::HashSet;

use super::poset::Poset;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::tuple::{DefectTable, SubspaceTuple};

/// A family of index sets closed under union and intersection, ordered by
/// inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOfSets {
    family: Vec<IndexSet>,
    hasse: Vec<(usize, usize)>,
}

impl LatticeOfSets {
    /// Sorts and deduplicates `family`, verifies closure under `∪` and `∩`,
    /// and computes the covering relation.
    pub fn from_family(mut family: Vec<IndexSet>) -> Result<Self> {
        family.sort();
        family.dedup();
        let members: HashSet<IndexSet> = family.iter().copied().collect();
        for (i, &a) in family.iter().enumerate() {
            for &b in &family[i + 1..] {
                for c in [a.union(b), a.intersection(b)] {
                    if !members.contains(&c) {
                        return Err(Error::Verification(format!(
                            "family not closed: {a}, {b} give {c}"
                        )));
                    }
                }
            }
        }
        let hasse = covering_pairs(&family);
        Ok(LatticeOfSets { family, hasse })
    }

    pub fn family(&self) -> &[IndexSet] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    /// Covering pairs `(lower, upper)` as positions in `family`.
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn position(&self, s: IndexSet) -> Option<usize> {
        self.family.binary_search(&s).ok()
    }

    pub fn bottom(&self) -> Option<IndexSet> {
        let meet = self.family.iter().copied().reduce(IndexSet::intersection)?;
        Some(meet)
    }

    /// Members covering exactly one member.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.hasse.iter().filter(|&&(_, up)| up == j).count() == 1)
            .collect()
    }
}

/// Covering pairs of a family of sets under inclusion.
pub fn covering_pairs(family: &[IndexSet]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (j, &b) in family.iter().enumerate() {
        let below: Vec<usize> = (0..family.len())
            .filter(|&i| family[i].is_proper_subset(b))
            .collect();
        for &i in &below {
            let a = family[i];
            if !below
                .iter()
                .any(|&k| a.is_proper_subset(family[k]))
            {
                out.push((i, j));
            }
        }
    }
    out.sort();
    out
}

/// The zero-defect subtuples of a linearly independent tuple.
pub fn bk_sublattice(t: &SubspaceTuple) -> Result<LatticeOfSets> {
    let table = t.defect_table()?;
    bk_sublattice_from_table(&table)
}

pub(crate) fn bk_sublattice_from_table(table: &DefectTable) -> Result<LatticeOfSets> {
    let ground = table.ground();
    if !table.is_independent(ground) {
        return Err(Error::Dependent(ground));
    }
    let family = ground
        .subsets()
        .filter(|&s| table.defect(s) == 0)
        .collect();
    LatticeOfSets::from_family(family)
}

/// The poset of join-irreducible members of a distributive lattice of sets,
/// together with the member behind each poset element.
#[derive(Clone, Debug)]
pub struct Birkhoff {
    pub poset: Poset,
    pub members: Vec<IndexSet>,
}

/// Birkhoff representation of `lat`, checked by rebuilding the lattice from
/// the order ideals of the poset.
pub fn birkhoff(lat: &LatticeOfSets) -> Result<Birkhoff> {
    let irreducibles = lat.join_irreducibles();
    let members: Vec<IndexSet> = irreducibles.iter().map(|&i| lat.family()[i]).collect();
    let labels = members.iter().map(|m| m.to_string()).collect();
    let leq = members
        .iter()
        .map(|a| members.iter().map(|b| a.is_subset(*b)).collect())
        .collect();
    let poset = Poset::from_relation(labels, leq)?;

    let bottom = lat.bottom().unwrap_or(IndexSet::EMPTY);
    let ideals = poset.down_sets();
    if ideals.len() != lat.len() {
        return Err(Error::Verification(format!(
            "{} order ideals for a lattice of {} members",
            ideals.len(),
            lat.len()
        )));
    }
    let mut images = HashSet::new();
    for ideal in ideals {
        let union = ideal
            .iter()
            .map(|a| members[a])
            .fold(bottom, IndexSet::union);
        if lat.position(union).is_none() || !images.insert(union) {
            return Err(Error::Verification(format!(
                "order ideal {ideal} maps to {union}, not a fresh member"
            )));
        }
        let recovered: IndexSet = (0..members.len())
            .filter(|&a| members[a].is_subset(union))
            .collect();
        if recovered != ideal {
            return Err(Error::Verification(format!(
                "member {union} does not recover ideal {ideal}"
            )));
        }
    }
    Ok(Birkhoff { poset, members })
}

pub fn birkhoff_poset(lat: &LatticeOfSets) -> Result<Poset> {
    Ok(birkhoff(lat)?.poset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::linalg::FieldSpec;

    fn set(xs: &[usize]) -> IndexSet {
        xs.iter().copied().collect()
    }

    fn lines(n: usize) -> SubspaceTuple {
        let gens: Vec<Vec<Vec<i64>>> = (0..n)
            .map(|i| vec![(0..n).map(|j| i64::from(i == j)).collect()])
            .collect();
        SubspaceTuple::from_integer_rows(FieldSpec::Rationals, n, &gens).unwrap()
    }

    #[test]
    fn sublattice_examples() {
        let lat = bk_sublattice(&examples::ex3()).unwrap();
        assert_eq!(lat.family(), &[IndexSet::EMPTY, set(&[0]), set(&[0, 1, 2])]);

        let lat = bk_sublattice(&lines(3)).unwrap();
        assert_eq!(lat.len(), 8);

        let lat = bk_sublattice(&examples::flag(FieldSpec::Rationals, 4)).unwrap();
        assert_eq!(
            lat.family(),
            &[
                IndexSet::EMPTY,
                set(&[0]),
                set(&[0, 1]),
                set(&[0, 1, 2]),
                set(&[0, 1, 2, 3])
            ]
        );
        assert_eq!(lat.hasse().len(), 4);

        assert!(matches!(bk_sublattice(&examples::ex1()), Err(Error::Dependent(_))));
    }

    #[test]
    fn poset_examples() {
        let p = birkhoff_poset(&bk_sublattice(&lines(3)).unwrap()).unwrap();
        assert!(p.is_isomorphic(&Poset::antichain(3)));
        let p = birkhoff_poset(&bk_sublattice(&examples::flag(FieldSpec::Rationals, 4)).unwrap()).unwrap();
        assert!(p.is_isomorphic(&Poset::chain(4)));
        let p = birkhoff_poset(&bk_sublattice(&examples::ex3()).unwrap()).unwrap();
        assert!(p.is_isomorphic(&Poset::chain(2)));
    }

    #[test]
    fn rejects_unclosed_family() {
        let r = LatticeOfSets::from_family(vec![IndexSet::EMPTY, set(&[0]), set(&[1])]);
        assert!(matches!(r, Err(Error::Verification(_))));
    }
}
