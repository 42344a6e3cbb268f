use super::lattice::{birkhoff_poset, bk_sublattice};
use super::poset::Poset;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Subspace};
use crate::tuple::SubspaceTuple;

/// A BK-tuple whose Birkhoff poset is `p`: one coordinate per element and
/// `L_j = ⟨e_i : i ≤ j⟩`.
pub fn realize_poset(p: &Poset, field: FieldSpec) -> Result<SubspaceTuple> {
    let n = p.len();
    if n == 0 {
        return Err(Error::InvalidPoset("poset is empty".into()));
    }
    let entries = (0..n)
        .map(|j| Subspace::coordinate(field, n, p.principal_ideal(j).iter()))
        .collect();
    let t = SubspaceTuple::new(field, n, entries)?;
    let back = birkhoff_poset(&bk_sublattice(&t)?)?;
    if !back.is_isomorphic(p) {
        return Err(Error::Verification(format!(
            "realized tuple has poset {back:?}, expected {p:?}"
        )));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::coordinate_basis;

    #[test]
    fn antichain_gives_coordinate_lines() {
        let t = realize_poset(&Poset::antichain(2), FieldSpec::Rationals).unwrap();
        assert_eq!(t.entries()[0], Subspace::coordinate(FieldSpec::Rationals, 2, [0]));
        assert_eq!(t.entries()[1], Subspace::coordinate(FieldSpec::Rationals, 2, [1]));
    }

    #[test]
    fn chain_gives_flag() {
        let f = FieldSpec::prime(3).unwrap();
        let t = realize_poset(&Poset::chain(4), f).unwrap();
        assert_eq!(t, crate::examples::flag(f, 4));
    }

    #[test]
    fn v_poset() {
        let labels = vec!["a".to_string(), "b".into(), "c".into()];
        let v = Poset::from_covers(labels, &[(0, 1), (0, 2)]).unwrap();
        let t = realize_poset(&v, FieldSpec::Rationals).unwrap();
        let dims: Vec<_> = t.entries().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![1, 2, 2]);
        assert_eq!(bk_sublattice(&t).unwrap().len(), 5);
        assert!(coordinate_basis(&t).unwrap().is_identity());
    }

    #[test]
    fn empty_poset_rejected() {
        assert!(realize_poset(&Poset::antichain(0), FieldSpec::Rationals).is_err());
    }
}
