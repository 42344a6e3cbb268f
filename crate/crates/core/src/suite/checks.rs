use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SuiteOptions;
use crate::bk::{
    coordinate_basis, decomposition_from_table, filtration_from, BkDecomposition,
};
use crate::error::Result;
use crate::index_set::IndexSet;
use crate::matroid::MinkowskiMatroid;
use crate::polymatroid::{
    distributive_decomposition, dual_partition_with_cap, dual_realization, Polymatroid,
};
use crate::tuple::{DefectTable, SubspaceTuple};

/// Largest dual space enumerated by the partition check.
const PARTITION_POINTS: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

/// A random tuple with the structures shared by the checks.
pub struct Case {
    pub tuple: SubspaceTuple,
    pub matroid: MinkowskiMatroid,
    pub poly: Polymatroid,
    salt: u64,
}

impl Case {
    pub fn new(tuple: SubspaceTuple, salt: u64, opts: &SuiteOptions) -> Result<Self> {
        let matroid = MinkowskiMatroid::new(tuple.clone())?;
        #[cfg(feature = "mutation-hook")]
        let matroid = if opts.rank_fault {
            matroid.with_rank_fault()
        } else {
            matroid
        };
        #[cfg(not(feature = "mutation-hook"))]
        let _ = opts;
        let table = matroid.table();
        let poly = Polymatroid::from_fn(tuple.len(), |s| Ok(table.span_dim(s)))?;
        Ok(Case {
            tuple,
            matroid,
            poly,
            salt,
        })
    }

    fn table(&self) -> &DefectTable {
        self.matroid.table()
    }

    fn ground(&self) -> IndexSet {
        self.tuple.ground()
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.salt);
        rng.set_stream(stream);
        rng
    }

    fn random_subset(&self, rng: &mut ChaCha8Rng, within: IndexSet) -> IndexSet {
        IndexSet::from_mask(within.mask() & rng.random::<u64>())
    }

    fn bk_subsets(&self) -> Vec<IndexSet> {
        self.ground()
            .subsets()
            .filter(|&s| self.table().is_bk(s))
            .collect()
    }

    /// The whole tuple when it is BK, else the BK core of the first basis.
    fn bk_target(&self) -> Option<SubspaceTuple> {
        let table = self.table();
        let ground = self.ground();
        let set = if table.is_bk(ground) {
            ground
        } else {
            let basis = *self.matroid.bases().first()?;
            self.matroid.max_bk_in_basis(basis).ok()?.set
        };
        if set.is_empty() {
            return None;
        }
        self.tuple.subtuple(set).ok()
    }
}

/// Positions of the elements of `inner` within `outer`.
fn relative(outer: IndexSet, inner: IndexSet) -> IndexSet {
    let order: Vec<usize> = outer.iter().collect();
    inner
        .iter()
        .map(|i| order.binary_search(&i).expect("inner is a subset of outer"))
        .collect()
}

fn decompose(t: &SubspaceTuple) -> Result<(DefectTable, BkDecomposition)> {
    let table = t.defect_table()?;
    let dec = decomposition_from_table(t, &table)?;
    Ok((table, dec))
}

/// A named, individually reportable theorem check.
pub struct Check {
    pub name: &'static str,
    pub statement: &'static str,
    run: fn(&Case) -> Result<Outcome>,
}

impl Check {
    pub fn evaluate(&self, case: &Case) -> Outcome {
        (self.run)(case).unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")))
    }
}

macro_rules! fail {
    ($($arg:tt)*) => {
        return Ok(Outcome::Fail(format!($($arg)*)))
    };
}

macro_rules! check {
    ($name:literal, $statement:literal, $run:expr) => {
        Check {
            name: $name,
            statement: $statement,
            run: $run,
        }
    };
}

pub fn registry() -> Vec<Check> {
    vec![
        check!(
            "quotient_defect_identity",
            "defect(n) = defect(k) + defect(n/k)",
            quotient_defect_identity
        ),
        check!(
            "quotient_relations",
            "dim <n'/k> = dim <n'> - dim <k> and (n'/h)/(k/h) matches n'/k",
            quotient_relations
        ),
        check!(
            "witness_agrees",
            "subset-defect scan, independence table and witness search agree",
            witness_agrees
        ),
        check!(
            "matroid_axioms",
            "hereditary, augmentation, rank is the largest independent subset, rank submodular",
            matroid_axioms
        ),
        check!("circuit_defect", "every circuit and every loop has defect -1", circuit_defect),
        check!(
            "circuit_minus_element_bk",
            "a circuit without any one element is BK",
            circuit_minus_element_bk
        ),
        check!(
            "basis_defect",
            "all bases share one defect >= 0, zero iff rank equals dimension",
            basis_defect
        ),
        check!(
            "basis_cores",
            "each basis has a unique maximal BK-subtuple, all of one cardinality",
            basis_cores
        ),
        check!(
            "cyclic_bases_bk",
            "every basis of a cyclic subtuple is BK",
            cyclic_bases_bk
        ),
        check!(
            "union_with_circuit",
            "defect(k + c) < defect(k) for every circuit c not inside k",
            union_with_circuit
        ),
        check!(
            "essential_iff_cyclic",
            "a nonempty subtuple is essential iff it is a union of circuits",
            essential_iff_cyclic
        ),
        check!(
            "maximal_essential",
            "union of circuits = unique inclusion-minimal subtuple of minimal defect",
            maximal_essential
        ),
        check!(
            "quotient_by_essential",
            "the quotient by the maximal essential subtuple is independent",
            quotient_by_essential
        ),
        check!(
            "quotient_is_contraction",
            "for BK k, the matroid of n/k is the contraction by k",
            quotient_is_contraction
        ),
        check!(
            "bk_lattice_closure",
            "zero-defect subsets of an independent tuple are closed under union and intersection",
            bk_lattice_closure
        ),
        check!(
            "bk_quotient_bijection",
            "BK-subtuples of n/k correspond to BK-subtuples of n containing k",
            bk_quotient_bijection
        ),
        check!(
            "bk_decomposition",
            "poset-indexed blocks are disjoint, cover, and have irreducible graded pieces",
            bk_decomposition
        ),
        check!(
            "filtration_shapes",
            "maximal BK-filtrations along different linear extensions have equal graded shapes",
            filtration_shapes
        ),
        check!(
            "coordinate_basis",
            "some basis makes the span of every BK-subtuple coordinate",
            coordinate_basis_check
        ),
        check!(
            "bk_polymatroid",
            "the spans of the principal ideals have a distributive lattice of flats",
            bk_polymatroid
        ),
        check!(
            "dual_rank_equality",
            "codimension of intersected complements equals the span rank",
            dual_rank_equality
        ),
        check!(
            "polymatroid_submodularity",
            "rank is normalized, monotone and submodular",
            polymatroid_submodularity
        ),
        check!(
            "flat_lattice",
            "flats are closed under intersection, rank-maximal, and closure is the least flat above",
            flat_lattice
        ),
        check!(
            "dual_partition",
            "dual points split into disjoint blocks keyed by flats, matching the constructible formula",
            dual_partition
        ),
        check!(
            "distributive_decomposition",
            "a returned basis makes every entry coordinate and keeps the flats",
            distributive_decomposition_check
        ),
    ]
}

fn quotient_defect_identity(c: &Case) -> Result<Outcome> {
    let t = &c.tuple;
    let mut rng = c.rng(1);
    let mut ks = vec![IndexSet::EMPTY, c.ground()];
    ks.extend((0..6).map(|_| c.random_subset(&mut rng, c.ground())));
    let whole = t.defect(c.ground())?;
    for k in ks {
        let q = t.quotient_tuple(k)?;
        let dq = q.defect(q.ground())?;
        let dk = t.defect(k)?;
        if whole != dk + dq {
            fail!("k = {k}: defect(n) = {whole}, defect(k) = {dk}, defect(n/k) = {dq}");
        }
    }
    Ok(Outcome::Pass)
}

fn quotient_relations(c: &Case) -> Result<Outcome> {
    let t = &c.tuple;
    let mut rng = c.rng(2);
    for _ in 0..4 {
        let n = c.random_subset(&mut rng, c.ground());
        let k = c.random_subset(&mut rng, n);
        let h = c.random_subset(&mut rng, k);

        let nk = t.quotient_of(n, k)?;
        let lhs = nk.span_dim(nk.ground())?;
        let rhs = t.span_dim(n)? - t.span_dim(k)?;
        if lhs != rhs {
            fail!("dim <{n}/{k}> = {lhs}, expected {rhs}");
        }

        let nh = t.quotient_of(n, h)?;
        let kh = relative(n.difference(h), k.difference(h));
        let iterated = nh.quotient_tuple(kh)?;
        if iterated.len() != nk.len() {
            fail!("({n}/{h})/({k}/{h}) has {} entries, {n}/{k} has {}", iterated.len(), nk.len());
        }
        for i in 0..nk.len() {
            for j in i..nk.len() {
                let pair: IndexSet = [i, j].into_iter().collect();
                if iterated.span_dim(pair)? != nk.span_dim(pair)? {
                    fail!("({n}/{h})/({k}/{h}) and {n}/{k} differ on entries {pair}");
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

fn witness_agrees(c: &Case) -> Result<Outcome> {
    let table = c.table();
    for s in c.ground().subsets() {
        let scan = s.subsets().all(|h| table.defect(h) >= 0);
        let indep = c.matroid.is_independent(s);
        let witness = c.matroid.witness(s);
        if scan != indep || witness.is_some() != indep {
            fail!(
                "{s}: scan {scan}, table {indep}, witness found {}",
                witness.is_some()
            );
        }
        if let Some(w) = witness {
            if w.indices() != s || !w.verify(&c.tuple) {
                fail!("{s}: witness does not check out");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn matroid_axioms(c: &Case) -> Result<Outcome> {
    let m = &c.matroid;
    let ground = c.ground();
    if !m.is_independent(IndexSet::EMPTY) {
        fail!("the empty set is dependent");
    }
    let independent: Vec<IndexSet> = ground.subsets().filter(|&s| m.is_independent(s)).collect();
    for &s in &independent {
        if let Some(i) = s.iter().find(|&i| !m.is_independent(s.without(i))) {
            fail!("{s} is independent but {} is not", s.without(i));
        }
    }
    for &a in &independent {
        for &b in &independent {
            if a.len() < b.len() && !b.difference(a).iter().any(|j| m.is_independent(a.with(j))) {
                fail!("{a} cannot be augmented from {b}");
            }
        }
    }
    for s in ground.subsets() {
        let largest = s.subsets().filter(|&h| m.is_independent(h)).map(IndexSet::len).max();
        if Some(m.rank(s)) != largest {
            fail!("rank {s} = {}, largest independent subset has {largest:?}", m.rank(s));
        }
    }
    for a in ground.subsets() {
        for b in ground.subsets() {
            if m.rank(a.union(b)) + m.rank(a.intersection(b)) > m.rank(a) + m.rank(b) {
                fail!("rank is not submodular on {a}, {b}");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn circuit_defect(c: &Case) -> Result<Outcome> {
    let circuits = c.matroid.circuits();
    if circuits.is_empty() {
        return Ok(Outcome::Skip);
    }
    for k in circuits {
        if c.matroid.defect(k) != -1 {
            fail!("circuit {k} has defect {}", c.matroid.defect(k));
        }
    }
    for i in c.matroid.loops().iter() {
        let s = IndexSet::singleton(i);
        if c.matroid.defect(s) != -1 || !c.table().is_circuit(s) {
            fail!("loop {i} is not a circuit of defect -1");
        }
    }
    Ok(Outcome::Pass)
}

fn circuit_minus_element_bk(c: &Case) -> Result<Outcome> {
    let circuits = c.matroid.circuits();
    if circuits.is_empty() {
        return Ok(Outcome::Skip);
    }
    for k in circuits {
        for i in k.iter() {
            if !c.table().is_bk(k.without(i)) {
                fail!("circuit {k} without {i} is not BK");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn basis_defect(c: &Case) -> Result<Outcome> {
    let m = &c.matroid;
    let d = m.basis_defect()?;
    let ground = c.ground();
    let r = m.rank(ground);
    if d < 0 {
        fail!("basis defect {d} is negative");
    }
    if let Some(b) = m.bases().into_iter().find(|b| b.len() != r) {
        fail!("basis {b} has {} elements, rank is {r}", b.len());
    }
    let full = r == c.table().span_dim(ground);
    if full != (d == 0) {
        fail!("rank {r}, dimension {}, basis defect {d}", c.table().span_dim(ground));
    }
    Ok(Outcome::Pass)
}

fn basis_cores(c: &Case) -> Result<Outcome> {
    let m = &c.matroid;
    if m.is_independent(c.ground()) {
        return Ok(Outcome::Skip);
    }
    let mut sizes = HashSet::new();
    for b in m.bases() {
        let core = m.max_bk_in_basis(b)?.set;
        if let Some(h) = b.subsets().find(|&h| m.defect(h) == 0 && !h.is_subset(core)) {
            fail!("basis {b}: zero-defect {h} escapes the core {core}");
        }
        sizes.insert(core.len());
    }
    if sizes.len() > 1 {
        fail!("maximal BK-subtuples of bases have sizes {sizes:?}");
    }
    Ok(Outcome::Pass)
}

fn cyclic_bases_bk(c: &Case) -> Result<Outcome> {
    let table = c.table();
    let cyclic: Vec<IndexSet> = c
        .ground()
        .subsets()
        .filter(|&s| !s.is_empty() && table.is_cyclic(s))
        .collect();
    if cyclic.is_empty() {
        return Ok(Outcome::Skip);
    }
    for s in cyclic {
        let r = c.matroid.rank(s);
        for b in s.subsets().filter(|&b| b.len() == r && table.is_independent(b)) {
            if table.defect(b) != 0 {
                fail!("basis {b} of cyclic {s} has defect {}", table.defect(b));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn union_with_circuit(c: &Case) -> Result<Outcome> {
    let circuits = c.matroid.circuits();
    if circuits.is_empty() {
        return Ok(Outcome::Skip);
    }
    let table = c.table();
    for k in c.ground().subsets() {
        for &cc in circuits.iter().filter(|cc| !cc.is_subset(k)) {
            if table.defect(k.union(cc)) >= table.defect(k) {
                fail!("defect({k} + {cc}) = {} >= defect({k})", table.defect(k.union(cc)));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn essential_iff_cyclic(c: &Case) -> Result<Outcome> {
    let table = c.table();
    for s in c.ground().subsets().filter(|s| !s.is_empty()) {
        let cyclic = c.matroid.is_cyclic(s)?;
        if table.is_essential(s) != cyclic {
            fail!("{s}: essential {}, cyclic {cyclic}", table.is_essential(s));
        }
    }
    Ok(Outcome::Pass)
}

fn maximal_essential(c: &Case) -> Result<Outcome> {
    if c.matroid.is_independent(c.ground()) {
        return Ok(Outcome::Skip);
    }
    match c.matroid.maximal_essential_subtuple()? {
        Some(_) => Ok(Outcome::Pass),
        None => fail!("dependent tuple without a maximal essential subtuple"),
    }
}

fn quotient_by_essential(c: &Case) -> Result<Outcome> {
    let Some(m) = c.matroid.maximal_essential_subtuple()? else {
        return Ok(Outcome::Skip);
    };
    let q = c.tuple.quotient_tuple(m)?;
    let qt = q.defect_table()?;
    if !qt.is_independent(q.ground()) {
        fail!("quotient by {m} is dependent");
    }
    Ok(Outcome::Pass)
}

fn quotient_is_contraction(c: &Case) -> Result<Outcome> {
    for k in c.bk_subsets() {
        let contraction = c.matroid.contract(k)?;
        let q = c.tuple.quotient_tuple(k)?;
        let qt = q.defect_table()?;
        for j in contraction.ground().subsets() {
            let jq = contraction.to_quotient_indices(j);
            if contraction.is_independent(j) != qt.is_independent(jq) {
                fail!("k = {k}, J = {j}: contraction and quotient disagree on independence");
            }
            if contraction.rank(j) != qt.rank(jq) {
                fail!("k = {k}, J = {j}: contraction and quotient disagree on rank");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn bk_lattice_closure(c: &Case) -> Result<Outcome> {
    let table = c.table();
    let ground = c.ground();
    let targets = if table.is_independent(ground) {
        vec![ground]
    } else {
        c.matroid.bases()
    };
    for b in targets {
        let family: Vec<IndexSet> = b.subsets().filter(|&s| table.defect(s) == 0).collect();
        for &x in &family {
            for &y in &family {
                for z in [x.union(y), x.intersection(y)] {
                    if table.defect(z) != 0 {
                        fail!("in {b}: {x} and {y} are BK but {z} has defect {}", table.defect(z));
                    }
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

fn bk_quotient_bijection(c: &Case) -> Result<Outcome> {
    let table = c.table();
    let ground = c.ground();
    if !table.is_independent(ground) {
        return Ok(Outcome::Skip);
    }
    for k in c.bk_subsets() {
        let q = c.tuple.quotient_tuple(k)?;
        let qt = q.defect_table()?;
        let rest = ground.difference(k);
        for j in rest.subsets() {
            let jq = relative(rest, j);
            if (qt.defect(jq) == 0) != (table.defect(j.union(k)) == 0) {
                fail!("k = {k}: {j} in the quotient and {} disagree", j.union(k));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn bk_decomposition(c: &Case) -> Result<Outcome> {
    let Some(t) = c.bk_target() else {
        return Ok(Outcome::Skip);
    };
    let (_, dec) = decompose(&t)?;
    let union = dec.subtuple_of(0..dec.blocks.len());
    if union != t.ground() {
        fail!("blocks cover {union} of {}", t.ground());
    }
    for (a, &ideal) in dec.ideals.iter().enumerate() {
        let below = dec.subtuple_of(dec.poset.principal_ideal(a).iter());
        if below != ideal {
            fail!("ideal of element {a} is {ideal}, its blocks give {below}");
        }
    }
    Ok(Outcome::Pass)
}

fn filtration_shapes(c: &Case) -> Result<Outcome> {
    let Some(t) = c.bk_target() else {
        return Ok(Outcome::Skip);
    };
    let (table, dec) = decompose(&t)?;
    let first = filtration_from(&t, &table, &dec, &dec.poset.linear_extension())?;
    let second = filtration_from(&t, &table, &dec, &dec.poset.reverse_linear_extension())?;
    for f in [&first, &second] {
        if f.chain.last() != Some(&t.ground()) {
            fail!("filtration {:?} does not end at the whole tuple", f.chain);
        }
    }
    if first.graded_shapes()? != second.graded_shapes()? {
        fail!(
            "graded shapes {:?} and {:?} differ",
            first.graded_shapes()?,
            second.graded_shapes()?
        );
    }
    Ok(Outcome::Pass)
}

fn coordinate_basis_check(c: &Case) -> Result<Outcome> {
    let Some(t) = c.bk_target() else {
        return Ok(Outcome::Skip);
    };
    let cb = coordinate_basis(&t)?;
    let table = t.defect_table()?;
    for s in t.ground().subsets().filter(|&s| table.is_bk(s)) {
        if !t.span(s)?.map(&cb.transform)?.is_coordinate() {
            fail!("span of BK-subtuple {s} is not coordinate");
        }
    }
    Ok(Outcome::Pass)
}

fn bk_polymatroid(c: &Case) -> Result<Outcome> {
    let Some(t) = c.bk_target() else {
        return Ok(Outcome::Skip);
    };
    let (_, dec) = decompose(&t)?;
    let spans = dec.ideals.iter().map(|&k| t.span(k)).collect::<Result<_>>()?;
    let spans = SubspaceTuple::new(t.field(), t.ambient_dim(), spans)?;
    if !Polymatroid::from_tuple(&spans)?.flats().is_distributive() {
        fail!("spans of principal ideals have a non-distributive lattice of flats");
    }
    Ok(Outcome::Pass)
}

fn dual_rank_equality(c: &Case) -> Result<Outcome> {
    let dual = dual_realization(&c.tuple)?;
    if dual.polymatroid()? != c.poly {
        fail!("dual polymatroid differs");
    }
    Ok(Outcome::Pass)
}

fn polymatroid_submodularity(c: &Case) -> Result<Outcome> {
    let p = &c.poly;
    if p.rank(IndexSet::EMPTY) != 0 {
        fail!("rank of the empty set is {}", p.rank(IndexSet::EMPTY));
    }
    if !p.is_monotone() {
        fail!("rank is not monotone");
    }
    if let Some((a, b)) = p.submodularity_violation() {
        fail!("rank is not submodular on {a}, {b}");
    }
    Ok(Outcome::Pass)
}

fn flat_lattice(c: &Case) -> Result<Outcome> {
    let p = &c.poly;
    let fl = p.flats();
    for &a in &fl.flats {
        for &b in &fl.flats {
            if fl.position(a.intersection(b)).is_none() {
                fail!("{a} and {b} are flats, {} is not", a.intersection(b));
            }
        }
        if let Some(j) = c.ground().difference(a).iter().find(|&j| p.rank(a.with(j)) == p.rank(a)) {
            fail!("flat {a} is not maximal for its rank: {j} adds nothing");
        }
    }
    for s in c.ground().subsets() {
        let least = fl
            .flats
            .iter()
            .filter(|f| s.is_subset(**f))
            .fold(c.ground(), |acc, &f| acc.intersection(f));
        if p.closure(s) != least {
            fail!("closure of {s} is {}, least flat above is {least}", p.closure(s));
        }
    }
    Ok(Outcome::Pass)
}

fn dual_partition(c: &Case) -> Result<Outcome> {
    let Some(p) = c.tuple.field().modulus() else {
        return Ok(Outcome::Skip);
    };
    let points = (p as u128).pow(c.tuple.ambient_dim() as u32);
    if points > u128::from(PARTITION_POINTS) {
        return Ok(Outcome::Skip);
    }
    let part = dual_partition_with_cap(&c.tuple, PARTITION_POINTS)?;
    let mut seen = HashSet::new();
    for (&flat, block) in &part.blocks {
        if !block.is_empty() && !c.poly.is_flat(flat) {
            fail!("block key {flat} is not a flat");
        }
        for x in block {
            if !seen.insert(x.clone()) {
                fail!("point {x:?} lies in two blocks");
            }
        }
    }
    if seen.len() as u128 != points || part.unassigned != 0 {
        fail!("blocks cover {} of {points} points", seen.len());
    }
    Ok(Outcome::Pass)
}

fn distributive_decomposition_check(c: &Case) -> Result<Outcome> {
    let flats = c.poly.flats();
    let Some(dec) = distributive_decomposition(&c.tuple)? else {
        if c.tuple.entries().iter().all(|e| e.is_coordinate()) {
            fail!("coordinate tuple reported without a decomposition");
        }
        return Ok(Outcome::Skip);
    };
    let mapped = c.tuple.map(&dec.transform)?;
    if let Some(i) = mapped.entries().iter().position(|e| !e.is_coordinate()) {
        fail!("entry {i} is not coordinate in the new basis");
    }
    if Polymatroid::from_tuple(&mapped)?.flats() != flats {
        fail!("change of basis altered the lattice of flats");
    }
    Ok(Outcome::Pass)
}
