use crate::bk::covering_pairs;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::tuple::{subset_cap, SubspaceTuple};

/// A polymatroid on `{0, .., n-1}` with a tabulated rank function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polymatroid {
    n: usize,
    rank: Vec<u32>,
}

/// `rk(I) = dim Σ_{i∈I} L_i`.
pub fn poly_rank(t: &SubspaceTuple, i: IndexSet) -> Result<usize> {
    t.span_dim(i)
}

impl Polymatroid {
    /// Rank of every subset, from an arbitrary rank oracle.
    pub fn from_fn(n: usize, mut rank: impl FnMut(IndexSet) -> Result<usize>) -> Result<Self> {
        let cap = subset_cap();
        if n > cap {
            return Err(Error::TooLarge { n, cap });
        }
        let rank = IndexSet::full(n)
            .subsets()
            .map(|s| rank(s).map(|r| r as u32))
            .collect::<Result<_>>()?;
        Ok(Polymatroid { n, rank })
    }

    /// The polymatroid realized by the subspace tuple.
    pub fn from_tuple(t: &SubspaceTuple) -> Result<Self> {
        let table = t.defect_table()?;
        Self::from_fn(t.len(), |s| Ok(table.span_dim(s)))
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

    pub fn rank(&self, s: IndexSet) -> usize {
        assert!(s.bound() <= self.n, "index set {s} out of range");
        self.rank[s.mask() as usize] as usize
    }

    /// Elements whose addition leaves the rank unchanged.
    pub fn closure(&self, s: IndexSet) -> IndexSet {
        let r = self.rank(s);
        (0..self.n)
            .filter(|&j| self.rank(s.with(j)) == r)
            .collect::<IndexSet>()
            .union(s)
    }

    pub fn is_flat(&self, s: IndexSet) -> bool {
        self.closure(s) == s
    }

    /// First pair violating `rk(A∪B) + rk(A∩B) ≤ rk(A) + rk(B)`, if any.
    pub fn submodularity_violation(&self) -> Option<(IndexSet, IndexSet)> {
        let g = self.ground();
        for a in g.subsets() {
            for b in g.subsets() {
                if self.rank(a.union(b)) + self.rank(a.intersection(b)) > self.rank(a) + self.rank(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.ground()
            .subsets()
            .all(|s| s.iter().all(|i| self.rank(s.without(i)) <= self.rank(s)))
    }

    pub fn flats(&self) -> FlatLattice {
        let mut flats: Vec<IndexSet> = self
            .ground()
            .subsets()
            .filter(|&s| self.is_flat(s))
            .collect();
        flats.sort();
        let ranks = flats.iter().map(|&f| self.rank(f)).collect();
        let pos = |s: IndexSet| flats.binary_search(&s).expect("flat");
        let k = flats.len();
        let mut meet = vec![vec![0; k]; k];
        let mut join = vec![vec![0; k]; k];
        for a in 0..k {
            for b in 0..k {
                meet[a][b] = pos(flats[a].intersection(flats[b]));
                join[a][b] = pos(self.closure(flats[a].union(flats[b])));
            }
        }
        let hasse = covering_pairs(&flats);
        FlatLattice {
            flats,
            ranks,
            hasse,
            meet,
            join,
        }
    }
}

/// The lattice of flats: meet is intersection, join is closure of union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    pub flats: Vec<IndexSet>,
    pub ranks: Vec<usize>,
    pub hasse: Vec<(usize, usize)>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
}

impl FlatLattice {
    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn position(&self, s: IndexSet) -> Option<usize> {
        self.flats.binary_search(&s).ok()
    }

    /// Three pairwise distinct elements with a common meet and a common join
    /// (a diamond).
    pub fn find_m3(&self) -> Option<[usize; 3]> {
        find_m3(&self.meet, &self.join)
    }

    /// `a < c` and `b` with `a∧b = c∧b`, `a∨b = c∨b` (a pentagon).
    pub fn find_n5(&self) -> Option<[usize; 3]> {
        find_n5(&self.meet, &self.join)
    }

    /// No diamond and no pentagon sublattice.
    pub fn is_distributive(&self) -> bool {
        self.find_m3().is_none() && self.find_n5().is_none()
    }
}

pub(crate) fn find_m3(meet: &[Vec<usize>], join: &[Vec<usize>]) -> Option<[usize; 3]> {
    let k = meet.len();
    for x in 0..k {
        for y in x + 1..k {
            let (m, j) = (meet[x][y], join[x][y]);
            if m == x || m == y {
                continue;
            }
            for z in y + 1..k {
                if meet[x][z] == m
                    && meet[y][z] == m
                    && join[x][z] == j
                    && join[y][z] == j
                    && z != m
                    && z != j
                {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

pub(crate) fn find_n5(meet: &[Vec<usize>], join: &[Vec<usize>]) -> Option<[usize; 3]> {
    let k = meet.len();
    for a in 0..k {
        for c in 0..k {
            if a == c || meet[a][c] != a {
                continue;
            }
            for b in 0..k {
                if meet[a][b] == meet[c][b] && join[a][b] == join[c][b] {
                    return Some([a, c, b]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::linalg::FieldSpec;

    fn set(xs: &[usize]) -> IndexSet {
        xs.iter().copied().collect()
    }

    fn distributive_law(l: &FlatLattice) -> bool {
        let k = l.len();
        (0..k).all(|x| {
            (0..k).all(|y| {
                (0..k).all(|z| l.meet[x][l.join[y][z]] == l.join[l.meet[x][y]][l.meet[x][z]])
            })
        })
    }

    #[test]
    fn rank_examples() {
        assert_eq!(poly_rank(&examples::ex1(), set(&[0, 1])).unwrap(), 1);
        assert_eq!(poly_rank(&examples::ex1(), IndexSet::EMPTY).unwrap(), 0);
        assert_eq!(poly_rank(&examples::ex3(), set(&[1, 2])).unwrap(), 3);
    }

    #[test]
    fn closure_examples() {
        let p = Polymatroid::from_tuple(&examples::ex1()).unwrap();
        assert_eq!(p.closure(set(&[0])), set(&[0, 1]));
        assert_eq!(p.closure(p.ground()), p.ground());
        // {2} already has full rank, so it is not a flat.
        assert_eq!(p.flats().flats, vec![IndexSet::EMPTY, set(&[0, 1]), set(&[0, 1, 2])]);

        let t = SubspaceTuple::from_integer_rows(
            FieldSpec::Rationals,
            2,
            &[vec![vec![1, 0]], vec![vec![0, 1]]],
        )
        .unwrap();
        let fl = Polymatroid::from_tuple(&t).unwrap().flats();
        assert_eq!(fl.flats, vec![IndexSet::EMPTY, set(&[0]), set(&[0, 1]), set(&[1])]);
    }

    #[test]
    fn loops_lie_in_the_bottom_flat() {
        let t = SubspaceTuple::from_integer_rows(FieldSpec::Rationals, 1, &[vec![vec![1]], vec![]])
            .unwrap();
        let fl = Polymatroid::from_tuple(&t).unwrap().flats();
        assert_eq!(fl.flats, vec![set(&[0, 1]), set(&[1])]);
    }

    #[test]
    fn distributivity_criteria_agree() {
        let der1 = Polymatroid::from_tuple(&examples::der1()).unwrap().flats();
        assert!(der1.find_m3().is_some());
        assert!(!der1.is_distributive());
        assert!(!distributive_law(&der1));

        let ex3 = Polymatroid::from_tuple(&examples::ex3()).unwrap().flats();
        assert!(ex3.is_distributive());
        assert!(distributive_law(&ex3));
    }

    #[test]
    fn pentagon_detected() {
        let t = SubspaceTuple::from_integer_rows(
            FieldSpec::Rationals,
            3,
            &[
                vec![vec![1, 0, 0]],
                vec![vec![1, 0, 0], vec![0, 1, 0]],
                vec![vec![0, 1, 1], vec![0, 0, 1]],
            ],
        )
        .unwrap();
        let fl = Polymatroid::from_tuple(&t).unwrap().flats();
        assert_eq!(fl.is_distributive(), distributive_law(&fl));
    }

    #[test]
    fn submodular_and_monotone() {
        for t in [examples::ex1(), examples::ex2(), examples::ex3(), examples::der1()] {
            let p = Polymatroid::from_tuple(&t).unwrap();
            assert!(p.submodularity_violation().is_none());
            assert!(p.is_monotone());
        }
    }
}
