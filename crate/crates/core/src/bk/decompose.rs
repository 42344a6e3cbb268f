use super::lattice::{birkhoff, bk_sublattice_from_table, LatticeOfSets};
use super::poset::Poset;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::linalg::{invert, Matrix, Subspace, Vector};
use crate::tuple::{DefectTable, SubspaceTuple};

/// The partition of a BK-tuple indexed by its Birkhoff poset.
#[derive(Clone, Debug)]
pub struct BkDecomposition {
    pub lattice: LatticeOfSets,
    pub poset: Poset,
    /// `k_(α)`: the BK-subtuple of the principal ideal of α.
    pub ideals: Vec<IndexSet>,
    /// `k_α = k_(α) ∖ k_(α)∖α`.
    pub blocks: Vec<IndexSet>,
    /// `k_(α) / k_(α)∖α`, an irreducible BK-tuple.
    pub graded: Vec<SubspaceTuple>,
}

impl BkDecomposition {
    /// Union of the blocks of a set of poset elements.
    pub fn subtuple_of(&self, elements: impl IntoIterator<Item = usize>) -> IndexSet {
        elements
            .into_iter()
            .map(|a| self.blocks[a])
            .fold(IndexSet::EMPTY, IndexSet::union)
    }
}

/// An increasing chain of BK-subtuples ending at the whole tuple.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub chain: Vec<IndexSet>,
    pub graded: Vec<SubspaceTuple>,
}

impl Filtration {
    /// Sorted `(cardinality, span dimension)` of the graded pieces.
    pub fn graded_shapes(&self) -> Result<Vec<(usize, usize)>> {
        let mut shapes = self
            .graded
            .iter()
            .map(|g| Ok((g.len(), g.span_dim(g.ground())?)))
            .collect::<Result<Vec<_>>>()?;
        shapes.sort();
        Ok(shapes)
    }
}

/// Fails with the first offending subset when `t` is not a BK-tuple.
pub fn require_bk(table: &DefectTable) -> Result<()> {
    let ground = table.ground();
    if let Some(bad) = ground.subsets().find(|&s| table.defect(s) < 0) {
        return Err(Error::NotBk {
            subset: bad,
            defect: table.defect(bad),
        });
    }
    let d = table.defect(ground);
    if d != 0 {
        return Err(Error::NotBk {
            subset: ground,
            defect: d,
        });
    }
    Ok(())
}

fn is_irreducible_bk(t: &SubspaceTuple) -> Result<bool> {
    if t.is_empty() {
        return Ok(false);
    }
    let c = t.classify(t.ground())?;
    Ok(c.bk && c.irreducible)
}

pub fn bk_decomposition(t: &SubspaceTuple) -> Result<BkDecomposition> {
    let table = t.defect_table()?;
    decomposition_from_table(t, &table)
}

pub(crate) fn decomposition_from_table(
    t: &SubspaceTuple,
    table: &DefectTable,
) -> Result<BkDecomposition> {
    require_bk(table)?;
    let lattice = bk_sublattice_from_table(table)?;
    let b = birkhoff(&lattice)?;
    let n = b.members.len();

    let mut blocks = Vec::with_capacity(n);
    let mut graded = Vec::with_capacity(n);
    for a in 0..n {
        let ideal = b.members[a];
        let lower = (0..n)
            .filter(|&c| b.poset.lt(c, a))
            .map(|c| b.members[c])
            .fold(IndexSet::EMPTY, IndexSet::union);
        let block = ideal.difference(lower);
        let piece = t.quotient_of(ideal, lower)?;
        if !is_irreducible_bk(&piece)? {
            return Err(Error::Verification(format!(
                "graded piece {ideal}/{lower} is not irreducible BK"
            )));
        }
        blocks.push(block);
        graded.push(piece);
    }

    let mut covered = IndexSet::EMPTY;
    for &blk in &blocks {
        if !covered.intersection(blk).is_empty() {
            return Err(Error::Verification(format!("block {blk} overlaps another block")));
        }
        covered = covered.union(blk);
    }
    if covered != t.ground() {
        return Err(Error::Verification(format!("blocks cover {covered} only")));
    }

    let minimal: Vec<usize> = (0..n)
        .filter(|&a| !(0..n).any(|c| b.poset.lt(c, a)))
        .collect();
    for (i, &a) in minimal.iter().enumerate() {
        for &c in &minimal[i + 1..] {
            let meet = t.span(b.members[a])?.intersect(&t.span(b.members[c])?)?;
            if !meet.is_zero() {
                return Err(Error::Verification(format!(
                    "spans of irreducible {} and {} meet in dimension {}",
                    b.members[a],
                    b.members[c],
                    meet.dim()
                )));
            }
        }
    }

    Ok(BkDecomposition {
        lattice,
        poset: b.poset,
        ideals: b.members,
        blocks,
        graded,
    })
}

/// The maximal BK-filtration following a linear extension of the poset.
pub fn maximal_bk_filtration(t: &SubspaceTuple, order: &[usize]) -> Result<Filtration> {
    let table = t.defect_table()?;
    let dec = decomposition_from_table(t, &table)?;
    filtration_from(t, &table, &dec, order)
}

pub(crate) fn filtration_from(
    t: &SubspaceTuple,
    table: &DefectTable,
    dec: &BkDecomposition,
    order: &[usize],
) -> Result<Filtration> {
    if !dec.poset.is_linear_extension(order) {
        return Err(Error::InvalidExtension);
    }
    let mut chain = vec![IndexSet::EMPTY];
    let mut graded = Vec::with_capacity(order.len());
    for &a in order {
        let prev = *chain.last().expect("chain starts at the empty set");
        let next = prev.union(dec.blocks[a]);
        if !table.is_bk(next) {
            return Err(Error::Verification(format!("filtration step {next} is not BK")));
        }
        let piece = t.quotient_of(next, prev)?;
        if !is_irreducible_bk(&piece)? {
            return Err(Error::Verification(format!(
                "graded piece {next}/{prev} is not irreducible BK"
            )));
        }
        chain.push(next);
        graded.push(piece);
    }
    Ok(Filtration { chain, graded })
}

/// A change of basis making the span of every BK-subtuple a coordinate
/// subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateBasis {
    /// New basis vectors in old coordinates.
    pub basis: Matrix,
    /// Maps old coordinates to new ones.
    pub transform: Matrix,
}

impl CoordinateBasis {
    pub fn is_identity(&self) -> bool {
        self.transform.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }
}

/// Chooses, along a linear extension of the Birkhoff poset, vectors
/// extending a basis of `⟨k_(α)∖α⟩` to one of `⟨k_(α)⟩`, then completes with
/// standard vectors. Vectors are finally ordered by leading coordinate.
pub fn coordinate_basis(t: &SubspaceTuple) -> Result<CoordinateBasis> {
    let table = t.defect_table()?;
    let dec = decomposition_from_table(t, &table)?;
    let f = t.field();
    let d = t.ambient_dim();

    let mut chosen: Vec<Vector> = Vec::new();
    let mut span = Subspace::zero(f, d);
    for a in dec.poset.linear_extension() {
        let target = t.span(dec.ideals[a])?;
        for row in target.basis() {
            if !span.contains_vector(row) {
                chosen.push(row.clone());
                span = span.sum(&Subspace::new(f, d, vec![row.clone()])?)?;
            }
        }
    }
    for i in 0..d {
        let e = crate::linalg::unit(&f, d, i);
        if !span.contains_vector(&e) {
            chosen.push(e.clone());
            span = span.sum(&Subspace::new(f, d, vec![e])?)?;
        }
    }
    let lead = |v: &Vector| v.iter().position(|x| !x.is_zero()).unwrap_or(d);
    chosen.sort_by_key(lead);

    // Columns of `basis_cols` are the new basis vectors.
    let basis_cols: Matrix = (0..d)
        .map(|r| chosen.iter().map(|v| v[r].clone()).collect())
        .collect();
    let transform = invert(&f, &basis_cols)
        .ok_or_else(|| Error::Verification("chosen vectors are not a basis".into()))?;

    for s in dec.lattice.family() {
        let image = t.span(*s)?.map(&transform)?;
        if !image.is_coordinate() {
            return Err(Error::Verification(format!(
                "span of BK-subtuple {s} is not coordinate after the change of basis"
            )));
        }
    }
    Ok(CoordinateBasis {
        basis: chosen,
        transform,
    })
}
