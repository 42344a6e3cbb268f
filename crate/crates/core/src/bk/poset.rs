use std::fmt;

use crate::error::{Error, Result};
use crate::index_set::{IndexSet, MAX_ELEMENTS};

/// A finite poset with a transitively closed order relation.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds the poset generated by `covers` (pairs `lower < upper`).
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("cover ({a},{b}) out of range")));
            }
            leq[a][b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            let through = leq[k].clone();
            for row in leq.iter_mut().filter(|row| row[k]) {
                for (cell, &t) in row.iter_mut().zip(&through) {
                    *cell |= t;
                }
            }
        }
        Self::from_relation(labels, leq)
    }

    /// Validates a full order relation.
    pub fn from_relation(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::InvalidPoset(format!("{n} elements exceed {MAX_ELEMENTS}")));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPoset("relation is not square".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::InvalidPoset(format!("{} is not reflexive", labels[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "cycle through {} and {}",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::InvalidPoset("relation is not transitive".into()));
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(*l)) {
            return Err(Error::InvalidPoset(format!("duplicate label {dup}")));
        }
        Ok(Poset { labels, leq })
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_covers(numbered(n), &[]).expect("antichain")
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(numbered(n), &covers).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Covering pairs `(a, b)` with `a ⋖ b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// `{b : b ≤ a}`.
    pub fn principal_ideal(&self, a: usize) -> IndexSet {
        (0..self.len()).filter(|&b| self.leq(b, a)).collect()
    }

    pub fn is_down_set(&self, s: IndexSet) -> bool {
        s.iter()
            .all(|a| self.principal_ideal(a).is_subset(s))
    }

    /// All order ideals, in lexicographic order.
    pub fn down_sets(&self) -> Vec<IndexSet> {
        let mut out = Vec::new();
        self.grow_down_sets(0, IndexSet::EMPTY, &mut out);
        out.sort();
        out
    }

    // Decides elements in index order; an element may join only if all its
    // strict predecessors already did, and must stay out if a successor did.
    fn grow_down_sets(&self, i: usize, cur: IndexSet, out: &mut Vec<IndexSet>) {
        if i == self.len() {
            if self.is_down_set(cur) {
                out.push(cur);
            }
            return;
        }
        self.grow_down_sets(i + 1, cur, out);
        let preds_ok = (0..i).all(|b| !self.lt(b, i) || cur.contains(b));
        if preds_ok {
            self.grow_down_sets(i + 1, cur.with(i), out);
        }
    }

    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        let n = self.len();
        let mut pos = vec![usize::MAX; n];
        for (k, &a) in order.iter().enumerate() {
            if a >= n || pos[a] != usize::MAX {
                return false;
            }
            pos[a] = k;
        }
        order.len() == n
            && (0..n).all(|a| (0..n).all(|b| !self.lt(a, b) || pos[a] < pos[b]))
    }

    /// The linear extension taking the smallest available index first.
    pub fn linear_extension(&self) -> Vec<usize> {
        self.linear_extension_by(|avail| avail.iter().next())
    }

    /// The linear extension taking the largest available index first.
    pub fn reverse_linear_extension(&self) -> Vec<usize> {
        self.linear_extension_by(|avail| avail.iter().last())
    }

    fn linear_extension_by(&self, pick: impl Fn(IndexSet) -> Option<usize>) -> Vec<usize> {
        let n = self.len();
        let mut done = IndexSet::EMPTY;
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let avail: IndexSet = (0..n)
                .filter(|&a| {
                    !done.contains(a) && (0..n).all(|b| !self.lt(b, a) || done.contains(b))
                })
                .collect();
            let a = pick(avail).expect("finite poset has a minimal element");
            done.insert(a);
            order.push(a);
        }
        order
    }

    fn signature(&self, a: usize) -> (usize, usize) {
        let n = self.len();
        (
            (0..n).filter(|&b| self.leq(b, a)).count(),
            (0..n).filter(|&b| self.leq(a, b)).count(),
        )
    }

    /// Order isomorphism test by backtracking over elements with matching
    /// up/down degrees.
    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        let n = self.len();
        if n != other.len() {
            return false;
        }
        let sig_a: Vec<_> = (0..n).map(|a| self.signature(a)).collect();
        let sig_b: Vec<_> = (0..n).map(|b| other.signature(b)).collect();
        let (mut sa, mut sb) = (sig_a.clone(), sig_b.clone());
        sa.sort();
        sb.sort();
        if sa != sb {
            return false;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_iso(other, 0, &sig_a, &sig_b, &mut map, &mut used)
    }

    fn extend_iso(
        &self,
        other: &Poset,
        a: usize,
        sig_a: &[(usize, usize)],
        sig_b: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if a == self.len() {
            return true;
        }
        for b in 0..other.len() {
            if used[b] || sig_a[a] != sig_b[b] {
                continue;
            }
            let consistent = (0..a).all(|x| {
                self.leq(x, a) == other.leq(map[x], b) && self.leq(a, x) == other.leq(b, map[x])
            });
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if self.extend_iso(other, a + 1, sig_a, sig_b, map, used) {
                return true;
            }
            used[b] = false;
        }
        map[a] = usize::MAX;
        false
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        write!(f, "Poset{:?} covers [{}]", self.labels, covers.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        numbered(n)
    }

    #[test]
    fn rejects_cycles() {
        let r = Poset::from_covers(labels(2), &[(0, 1), (1, 0)]);
        assert!(matches!(r, Err(Error::InvalidPoset(_))));
        let r = Poset::from_covers(labels(2), &[(0, 2)]);
        assert!(r.is_err());
    }

    #[test]
    fn from_relation_checks_transitivity() {
        let leq = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(Poset::from_relation(labels(3), leq).is_err());
    }

    #[test]
    fn down_sets_of_v_poset() {
        let v = Poset::from_covers(labels(3), &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(v.down_sets().len(), 5);
        assert_eq!(Poset::chain(4).down_sets().len(), 5);
        assert_eq!(Poset::antichain(4).down_sets().len(), 16);
    }

    #[test]
    fn isomorphism() {
        let v = Poset::from_covers(labels(3), &[(0, 1), (0, 2)]).unwrap();
        let v2 = Poset::from_covers(labels(3), &[(2, 0), (2, 1)]).unwrap();
        let wedge = Poset::from_covers(labels(3), &[(0, 2), (1, 2)]).unwrap();
        assert!(v.is_isomorphic(&v2));
        assert!(!v.is_isomorphic(&wedge));
        assert!(!Poset::chain(3).is_isomorphic(&Poset::antichain(3)));
        // Same degree multisets, different shape.
        let n = Poset::from_covers(labels(4), &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let z = Poset::from_covers(labels(4), &[(0, 2), (1, 3), (0, 3)]).unwrap();
        assert!(n.is_isomorphic(&z));
    }

    #[test]
    fn linear_extensions() {
        let p = Poset::from_covers(labels(3), &[(2, 0)]).unwrap();
        assert_eq!(p.linear_extension(), vec![1, 2, 0]);
        assert_eq!(p.reverse_linear_extension(), vec![2, 1, 0]);
        assert!(p.is_linear_extension(&[2, 0, 1]));
        assert!(!p.is_linear_extension(&[0, 2, 1]));
        assert!(!p.is_linear_extension(&[2, 0]));
        assert!(!p.is_linear_extension(&[2, 2, 0]));
    }
}
