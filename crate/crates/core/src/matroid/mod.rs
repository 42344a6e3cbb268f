//! The Minkowski matroid of a subspace tuple: independent sets are the
//! linearly independent subtuples.

mod witness;

pub use witness::Witness;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::tuple::{subset_cap, DefectTable, SubspaceTuple, TupleClass};

#[derive(Clone, Debug)]
pub struct MinkowskiMatroid {
    tuple: SubspaceTuple,
    table: DefectTable,
    #[cfg(feature = "mutation-hook")]
    rank_fault: bool,
}

/// The unique maximal BK-subtuple of a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisCore {
    pub set: IndexSet,
    /// The ground tuple is independent, where the notion is not the one
    /// from the dependent case: the basis is the whole tuple and the core
    /// is merely the union of its zero-defect subsets.
    pub degenerate: bool,
}

impl MinkowskiMatroid {
    pub fn new(tuple: SubspaceTuple) -> Result<Self> {
        Self::with_cap(tuple, subset_cap())
    }

    pub fn with_cap(tuple: SubspaceTuple, cap: usize) -> Result<Self> {
        let table = DefectTable::with_cap(&tuple, cap)?;
        Ok(MinkowskiMatroid {
            tuple,
            table,
            #[cfg(feature = "mutation-hook")]
            rank_fault: false,
        })
    }

    /// Makes `rank` report one more than the truth on nonempty sets.
    #[cfg(feature = "mutation-hook")]
    pub fn with_rank_fault(mut self) -> Self {
        self.rank_fault = true;
        self
    }

    pub fn tuple(&self) -> &SubspaceTuple {
        &self.tuple
    }

    pub fn table(&self) -> &DefectTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.tuple.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuple.is_empty()
    }

    pub fn ground(&self) -> IndexSet {
        self.tuple.ground()
    }

    pub fn defect(&self, s: IndexSet) -> i64 {
        self.table.defect(s)
    }

    pub fn is_independent(&self, s: IndexSet) -> bool {
        self.table.is_independent(s)
    }

    pub fn witness(&self, s: IndexSet) -> Option<Witness> {
        assert!(s.bound() <= self.len(), "index set {s} out of range");
        witness::find_witness(&self.tuple, s)
    }

    pub fn rank(&self, s: IndexSet) -> usize {
        let r = self.table.rank(s);
        #[cfg(feature = "mutation-hook")]
        if self.rank_fault && !s.is_empty() {
            return r + 1;
        }
        r
    }

    pub fn classify(&self, s: IndexSet) -> Result<TupleClass> {
        self.table.classify(s)
    }

    /// Maximal independent sets, in lexicographic order.
    pub fn bases(&self) -> Vec<IndexSet> {
        let r = self.rank(self.ground());
        let mut out: Vec<IndexSet> = self
            .ground()
            .subsets()
            .filter(|&s| s.len() == r && self.is_independent(s))
            .collect();
        out.sort();
        out
    }

    /// Minimal dependent sets, in lexicographic order.
    pub fn circuits(&self) -> Vec<IndexSet> {
        self.table.circuits_within(self.ground())
    }

    /// Indices holding the zero subspace.
    pub fn loops(&self) -> IndexSet {
        (0..self.len())
            .filter(|&i| self.tuple.entries()[i].is_zero())
            .collect()
    }

    /// Indices contained in every basis.
    pub fn coloops(&self) -> IndexSet {
        self.bases()
            .into_iter()
            .fold(self.ground(), IndexSet::intersection)
    }

    /// The common defect of all bases, checked to agree across bases and
    /// with `dim ⟨n⟩ − rk(n)`.
    pub fn basis_defect(&self) -> Result<i64> {
        let ground = self.ground();
        let expected = self.table.span_dim(ground) as i64 - self.rank(ground) as i64;
        let bases = self.bases();
        if bases.is_empty() {
            return Err(Error::Verification("matroid has no basis".into()));
        }
        for b in bases {
            let d = self.defect(b);
            if d != expected {
                return Err(Error::Verification(format!(
                    "basis {b} has defect {d}, expected {expected}"
                )));
            }
        }
        Ok(expected)
    }

    /// The contraction by an independent set `k`.
    pub fn contract(&self, k: IndexSet) -> Result<Contraction<'_>> {
        self.tuple.check(k)?;
        if !self.is_independent(k) {
            return Err(Error::Dependent(k));
        }
        Ok(Contraction {
            matroid: self,
            contracted: k,
        })
    }

    fn is_basis(&self, b: IndexSet) -> bool {
        b.bound() <= self.len() && self.is_independent(b) && b.len() == self.rank(self.ground())
    }

    /// Union of all zero-defect subsets of the basis `b`.
    pub fn max_bk_in_basis(&self, b: IndexSet) -> Result<BasisCore> {
        if !self.is_basis(b) {
            return Err(Error::NotBasis(b));
        }
        let set = b
            .subsets()
            .filter(|&h| self.defect(h) == 0)
            .fold(IndexSet::EMPTY, IndexSet::union);
        if self.defect(set) != 0 {
            return Err(Error::Verification(format!(
                "union {set} of zero-defect subsets of {b} has defect {}",
                self.defect(set)
            )));
        }
        Ok(BasisCore {
            set,
            degenerate: self.is_independent(self.ground()),
        })
    }

    /// Union-of-circuits test, cross-checked against essentiality.
    pub fn is_cyclic(&self, s: IndexSet) -> Result<bool> {
        self.tuple.check(s)?;
        let cyclic = self.table.is_cyclic(s);
        if !s.is_empty() && cyclic != self.table.is_essential(s) {
            return Err(Error::Verification(format!(
                "{s}: cyclic = {cyclic} but essential = {}",
                !cyclic
            )));
        }
        Ok(cyclic)
    }

    /// The maximal essential subtuple of a dependent tuple, computed as the
    /// union of all circuits and as the inclusion-minimal subset of minimal
    /// defect. `None` for an independent tuple.
    pub fn maximal_essential_subtuple(&self) -> Result<Option<IndexSet>> {
        let ground = self.ground();
        if self.is_independent(ground) {
            return Ok(None);
        }
        let union = self
            .circuits()
            .into_iter()
            .fold(IndexSet::EMPTY, IndexSet::union);

        let min = ground
            .subsets()
            .map(|s| self.defect(s))
            .min()
            .expect("nonempty powerset");
        let minimizers: Vec<IndexSet> = ground
            .subsets()
            .filter(|&s| self.defect(s) == min)
            .collect();
        let minimal: Vec<IndexSet> = minimizers
            .iter()
            .copied()
            .filter(|&s| !minimizers.iter().any(|&h| h.is_proper_subset(s)))
            .collect();
        match minimal.as_slice() {
            [m] if *m == union => Ok(Some(union)),
            [m] => Err(Error::Verification(format!(
                "union of circuits {union} differs from minimal min-defect subtuple {m}"
            ))),
            _ => Err(Error::Verification(format!(
                "{} inclusion-minimal subtuples of defect {min}",
                minimal.len()
            ))),
        }
    }
}

/// `M / k`: ground set `E ∖ k`, independent sets `J` with `J ∪ k` independent.
#[derive(Clone, Copy, Debug)]
pub struct Contraction<'a> {
    matroid: &'a MinkowskiMatroid,
    contracted: IndexSet,
}

impl Contraction<'_> {
    pub fn contracted(&self) -> IndexSet {
        self.contracted
    }

    pub fn ground(&self) -> IndexSet {
        self.matroid.ground().difference(self.contracted)
    }

    pub fn is_independent(&self, j: IndexSet) -> bool {
        j.is_subset(self.ground()) && self.matroid.is_independent(j.union(self.contracted))
    }

    pub fn rank(&self, j: IndexSet) -> usize {
        self.matroid.rank(j.union(self.contracted)) - self.contracted.len()
    }

    /// Renumbers a subset of the remaining ground set to positions in the
    /// quotient tuple `n/k`.
    pub fn to_quotient_indices(&self, j: IndexSet) -> IndexSet {
        let ground: Vec<usize> = self.ground().iter().collect();
        j.iter()
            .map(|i| ground.binary_search(&i).expect("element of contraction ground"))
            .collect()
    }
}
