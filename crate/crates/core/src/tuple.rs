//! Subspace tuples, defects, subtuple classification and quotient tuples.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::index_set::{IndexSet, MAX_ELEMENTS};
use crate::linalg::{FieldSpec, Matrix, QuotientContext, Subspace};

/// Default limit on the number of elements whose subsets are enumerated.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Largest limit [`set_subset_cap`] accepts.
pub const MAX_SUBSET_CAP: usize = 30;

static SUBSET_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SUBSET_CAP);

/// The process-wide limit used by [`SubspaceTuple::defect_table`] and
/// everything built on it.
pub fn subset_cap() -> usize {
    SUBSET_CAP.load(Ordering::Relaxed)
}

pub fn set_subset_cap(cap: usize) -> Result<()> {
    if cap > MAX_SUBSET_CAP {
        return Err(Error::TooLarge {
            n: cap,
            cap: MAX_SUBSET_CAP,
        });
    }
    SUBSET_CAP.store(cap, Ordering::Relaxed);
    Ok(())
}

/// An ordered tuple of subspaces of one ambient space. Entries are
/// identified by position; repeated subspaces are distinct elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceTuple {
    field: FieldSpec,
    ambient_dim: usize,
    entries: Vec<Subspace>,
}

/// Structural flags of a subtuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleClass {
    pub independent: bool,
    pub bk: bool,
    pub irreducible: bool,
    pub essential: bool,
    pub cyclic: bool,
    pub defect: i64,
}

impl SubspaceTuple {
    pub fn new(field: FieldSpec, ambient_dim: usize, entries: Vec<Subspace>) -> Result<Self> {
        if entries.len() > MAX_ELEMENTS {
            return Err(Error::TooLarge {
                n: entries.len(),
                cap: MAX_ELEMENTS,
            });
        }
        for e in &entries {
            if e.field() != field || e.ambient_dim() != ambient_dim {
                return Err(Error::AmbientMismatch {
                    left: format!("{field}^{ambient_dim}"),
                    right: format!("{}^{}", e.field(), e.ambient_dim()),
                });
            }
        }
        Ok(SubspaceTuple {
            field,
            ambient_dim,
            entries,
        })
    }

    /// Each entry given by integer generator rows.
    pub fn from_integer_rows(
        field: FieldSpec,
        ambient_dim: usize,
        generators: &[Vec<Vec<i64>>],
    ) -> Result<Self> {
        let entries = generators
            .iter()
            .map(|rows| Subspace::from_integers(field, ambient_dim, rows))
            .collect::<Result<_>>()?;
        Self::new(field, ambient_dim, entries)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Subspace] {
        &self.entries
    }

    pub fn ground(&self) -> IndexSet {
        IndexSet::full(self.len())
    }

    pub fn check(&self, s: IndexSet) -> Result<()> {
        if s.bound() > self.len() {
            return Err(Error::IndexOutOfRange {
                index: s.bound() - 1,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// The linear span of the indexed subspaces.
    pub fn span(&self, s: IndexSet) -> Result<Subspace> {
        self.check(s)?;
        s.iter().try_fold(Subspace::zero(self.field, self.ambient_dim), |acc, i| {
            acc.sum(&self.entries[i])
        })
    }

    pub fn span_dim(&self, s: IndexSet) -> Result<usize> {
        Ok(self.span(s)?.dim())
    }

    /// `dim ⟨s⟩ − |s|`; zero for the empty set.
    pub fn defect(&self, s: IndexSet) -> Result<i64> {
        Ok(self.span_dim(s)? as i64 - s.len() as i64)
    }

    /// The entries of `s` in index order.
    pub fn subtuple(&self, s: IndexSet) -> Result<SubspaceTuple> {
        self.check(s)?;
        Ok(SubspaceTuple {
            field: self.field,
            ambient_dim: self.ambient_dim,
            entries: s.iter().map(|i| self.entries[i].clone()).collect(),
        })
    }

    /// `n/k`: the entries outside `k`, projected to `V/⟨k⟩`.
    pub fn quotient_tuple(&self, k: IndexSet) -> Result<SubspaceTuple> {
        self.quotient_of(self.ground(), k)
    }

    /// `target/by`: the entries of `target ∖ by`, in index order, projected
    /// to `V/⟨by⟩`.
    pub fn quotient_of(&self, target: IndexSet, by: IndexSet) -> Result<SubspaceTuple> {
        self.check(target)?;
        let kernel = self.span(by)?;
        let ctx = QuotientContext::new(self.ambient_dim, &kernel)?;
        let entries = target
            .difference(by)
            .iter()
            .map(|i| ctx.project(&self.entries[i]))
            .collect::<Result<_>>()?;
        Ok(SubspaceTuple {
            field: self.field,
            ambient_dim: ctx.quotient_dim(),
            entries,
        })
    }

    /// The tuple expressed in new coordinates `v ↦ m·v`.
    pub fn map(&self, m: &Matrix) -> Result<SubspaceTuple> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.map(m))
            .collect::<Result<_>>()?;
        Ok(SubspaceTuple {
            field: self.field,
            ambient_dim: m.len(),
            entries,
        })
    }

    pub fn defect_table(&self) -> Result<DefectTable> {
        DefectTable::with_cap(self, subset_cap())
    }

    /// Classifies the subtuple `s` by exhaustive subset scan.
    pub fn classify(&self, s: IndexSet) -> Result<TupleClass> {
        self.check(s)?;
        self.defect_table()?.classify(s)
    }
}

/// Span dimensions of every subtuple, with the derived independence and
/// rank tables.
#[derive(Clone, Debug)]
pub struct DefectTable {
    n: usize,
    dims: Vec<u32>,
    independent: Vec<bool>,
    rank: Vec<u8>,
}

impl DefectTable {
    pub fn with_cap(t: &SubspaceTuple, cap: usize) -> Result<Self> {
        let n = t.len();
        if n > cap || n > MAX_SUBSET_CAP {
            return Err(Error::TooLarge { n, cap });
        }
        let size = 1usize << n;
        let mut dims = vec![0u32; size];
        fill_dims(t, 0, 0, Subspace::zero(t.field, t.ambient_dim), &mut dims)?;

        let mut independent = vec![false; size];
        let mut rank = vec![0u8; size];
        for mask in 0..size {
            let s = IndexSet::from_mask(mask as u64);
            let defect_ok = dims[mask] as usize >= s.len();
            let subs_ok = s.iter().all(|i| independent[mask & !(1 << i)]);
            independent[mask] = defect_ok && subs_ok;
            rank[mask] = if independent[mask] {
                s.len() as u8
            } else {
                s.iter().map(|i| rank[mask & !(1 << i)]).max().unwrap_or(0)
            };
        }
        Ok(DefectTable {
            n,
            dims,
            independent,
            rank,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ground(&self) -> IndexSet {
        IndexSet::full(self.n)
    }

    fn idx(&self, s: IndexSet) -> usize {
        assert!(s.bound() <= self.n, "index set {s} out of range");
        s.mask() as usize
    }

    pub fn span_dim(&self, s: IndexSet) -> usize {
        self.dims[self.idx(s)] as usize
    }

    pub fn defect(&self, s: IndexSet) -> i64 {
        self.span_dim(s) as i64 - s.len() as i64
    }

    /// Every subset of `s` has non-negative defect.
    pub fn is_independent(&self, s: IndexSet) -> bool {
        self.independent[self.idx(s)]
    }

    /// Largest independent subset of `s`.
    pub fn rank(&self, s: IndexSet) -> usize {
        self.rank[self.idx(s)] as usize
    }

    pub fn is_bk(&self, s: IndexSet) -> bool {
        self.is_independent(s) && self.defect(s) == 0
    }

    pub fn is_irreducible(&self, s: IndexSet) -> bool {
        self.is_independent(s)
            && s.subsets()
                .filter(|&h| !h.is_empty() && h != s)
                .all(|h| self.defect(h) > 0)
    }

    /// Every proper subset, the empty one included, has strictly larger defect.
    pub fn is_essential(&self, s: IndexSet) -> bool {
        let d = self.defect(s);
        !s.is_empty() && s.subsets().filter(|&h| h != s).all(|h| self.defect(h) > d)
    }

    pub fn is_circuit(&self, s: IndexSet) -> bool {
        !s.is_empty()
            && !self.is_independent(s)
            && s.iter().all(|i| self.is_independent(s.without(i)))
    }

    /// Circuits contained in `s`, in lexicographic order.
    pub fn circuits_within(&self, s: IndexSet) -> Vec<IndexSet> {
        let mut out: Vec<IndexSet> = s.subsets().filter(|&c| self.is_circuit(c)).collect();
        out.sort();
        out
    }

    /// Every element of `s` lies in a circuit contained in `s`.
    pub fn is_cyclic(&self, s: IndexSet) -> bool {
        let covered = self
            .circuits_within(s)
            .into_iter()
            .fold(IndexSet::EMPTY, IndexSet::union);
        covered == s
    }

    pub fn classify(&self, s: IndexSet) -> Result<TupleClass> {
        if s.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if s.bound() > self.n {
            return Err(Error::IndexOutOfRange {
                index: s.bound() - 1,
                len: self.n,
            });
        }
        let independent = self.is_independent(s);
        let defect = self.defect(s);
        Ok(TupleClass {
            independent,
            bk: independent && defect == 0,
            irreducible: self.is_irreducible(s),
            essential: self.is_essential(s),
            cyclic: self.is_cyclic(s),
            defect,
        })
    }
}

fn fill_dims(
    t: &SubspaceTuple,
    i: usize,
    mask: usize,
    current: Subspace,
    dims: &mut [u32],
) -> Result<()> {
    if i == t.len() {
        dims[mask] = current.dim() as u32;
        return Ok(());
    }
    let with = current.sum(&t.entries[i])?;
    fill_dims(t, i + 1, mask, current, dims)?;
    fill_dims(t, i + 1, mask | 1 << i, with, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn set(xs: &[usize]) -> IndexSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn span_dim_examples() {
        let ex1 = examples::ex1();
        assert_eq!(ex1.span_dim(set(&[0, 1, 2])).unwrap(), 2);
        assert_eq!(ex1.span_dim(IndexSet::EMPTY).unwrap(), 0);
        let der1 = examples::der1();
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(der1.span_dim(set(&pair)).unwrap(), 2);
        }
        assert!(matches!(
            ex1.span_dim(set(&[3])),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn defect_examples() {
        assert_eq!(examples::ex1().defect(set(&[0, 1])).unwrap(), -1);
        assert_eq!(examples::ex2().defect(set(&[0, 2])).unwrap(), 1);
        assert_eq!(examples::der1().defect(set(&[0, 1, 2])).unwrap(), -1);
        assert_eq!(examples::der1().defect(IndexSet::EMPTY).unwrap(), 0);
    }

    #[test]
    fn classify_examples() {
        let c = examples::ex3().classify(set(&[0, 1, 2])).unwrap();
        assert!(c.independent && c.bk && !c.irreducible);

        let c = examples::ex1().classify(set(&[0, 1])).unwrap();
        assert!(!c.independent && c.essential && c.cyclic);

        let der1 = examples::der1();
        let c = der1.classify(set(&[0, 1, 2])).unwrap();
        assert!(!c.independent && c.essential && c.defect == -1);
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert!(der1.classify(set(&pair)).unwrap().bk);
        }
        assert_eq!(der1.classify(IndexSet::EMPTY), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn single_line_is_irreducible_not_essential() {
        let c = examples::ex3().classify(set(&[0])).unwrap();
        assert!(c.bk && c.irreducible && !c.essential && !c.cyclic);
    }

    #[test]
    fn loop_is_essential_circuit() {
        let f = FieldSpec::Rationals;
        let t = SubspaceTuple::from_integer_rows(f, 2, &[vec![vec![1, 0]], vec![]]).unwrap();
        let c = t.classify(set(&[1])).unwrap();
        assert_eq!(c.defect, -1);
        assert!(c.essential && c.cyclic && !c.independent);
    }

    #[test]
    fn quotient_examples() {
        let ex1 = examples::ex1();
        let q = ex1.quotient_tuple(set(&[1])).unwrap();
        let dims: Vec<_> = q.entries().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![0, 1]);
        assert_eq!(q.defect(q.ground()).unwrap(), -1);

        let ex2 = examples::ex2();
        let q = ex2.quotient_tuple(set(&[0, 1])).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q.entries()[0].dim(), 2);
        assert!(q.classify(q.ground()).unwrap().independent);

        let q = ex2.quotient_tuple(IndexSet::EMPTY).unwrap();
        assert_eq!(q, ex2);
    }

    #[test]
    fn rejects_too_many_elements() {
        let f = FieldSpec::prime(2).unwrap();
        let t = SubspaceTuple::new(f, 1, vec![Subspace::zero(f, 1); 21]).unwrap();
        assert!(matches!(t.defect_table(), Err(Error::TooLarge { n: 21, cap: 20 })));
        assert!(DefectTable::with_cap(&t, 21).is_ok());
    }
}
