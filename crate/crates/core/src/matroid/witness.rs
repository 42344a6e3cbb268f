//! Independent transversals of basis rows, found by matroid intersection.
//!
//! The candidate vectors are the stored basis rows of each indexed subspace.
//! A transversal picks one row per index (a partition matroid) such that the
//! picked rows are linearly independent (a linear matroid). Augmenting paths
//! in the exchange graph grow a common independent set until no path is left;
//! a full transversal exists exactly when the subtuple is independent.

use std::collections::VecDeque;

use crate::index_set::IndexSet;
use crate::linalg::{rank, Subspace, Vector};
use crate::tuple::SubspaceTuple;

/// One vector per index, each inside its subspace, jointly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub vectors: Vec<(usize, Vector)>,
}

impl Witness {
    pub fn indices(&self) -> IndexSet {
        self.vectors.iter().map(|(i, _)| *i).collect()
    }

    /// Exact check: membership of every vector and full rank of the family.
    pub fn verify(&self, t: &SubspaceTuple) -> bool {
        let members = self
            .vectors
            .iter()
            .all(|(i, v)| *i < t.len() && t.entries()[*i].contains_vector(v));
        let rows: Vec<Vector> = self.vectors.iter().map(|(_, v)| v.clone()).collect();
        members
            && self.indices().len() == self.vectors.len()
            && rank(&t.field(), &rows, t.ambient_dim()) == rows.len()
    }
}

struct Candidate {
    owner: usize,
    vector: Vector,
}

pub(crate) fn find_witness(t: &SubspaceTuple, s: IndexSet) -> Option<Witness> {
    let field = t.field();
    let d = t.ambient_dim();
    let candidates: Vec<Candidate> = s
        .iter()
        .flat_map(|i| {
            t.entries()[i].basis().iter().map(move |v| Candidate {
                owner: i,
                vector: v.clone(),
            })
        })
        .collect();
    let m = candidates.len();
    let mut chosen = vec![false; m];
    let mut size = 0;

    let span_of = |chosen: &[bool], skip: Option<usize>| -> Subspace {
        let rows = (0..m)
            .filter(|&e| chosen[e] && Some(e) != skip)
            .map(|e| candidates[e].vector.clone())
            .collect();
        Subspace::new(field, d, rows).expect("rows have ambient length")
    };

    while size < s.len() {
        let used: IndexSet = (0..m)
            .filter(|&e| chosen[e])
            .map(|e| candidates[e].owner)
            .collect();
        let full_span = span_of(&chosen, None);
        let in_set: Vec<usize> = (0..m).filter(|&e| chosen[e]).collect();
        let spans_without: Vec<(usize, Subspace)> = in_set
            .iter()
            .map(|&y| (y, span_of(&chosen, Some(y))))
            .collect();

        let is_source = |x: usize| !chosen[x] && !used.contains(candidates[x].owner);
        let is_sink = |x: usize| !chosen[x] && !full_span.contains_vector(&candidates[x].vector);

        // BFS over the exchange graph from the sources.
        let mut prev: Vec<Option<usize>> = vec![None; m];
        let mut seen = vec![false; m];
        let mut queue = VecDeque::new();
        for (x, seen_x) in seen.iter_mut().enumerate() {
            if is_source(x) {
                *seen_x = true;
                queue.push_back(x);
            }
        }
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if !chosen[u] && is_sink(u) {
                end = Some(u);
                break;
            }
            if chosen[u] {
                // y ∈ I → x ∉ I when I − y + x keeps one vector per owner.
                for x in 0..m {
                    if seen[x] || chosen[x] {
                        continue;
                    }
                    let owner = candidates[x].owner;
                    if !used.contains(owner) || owner == candidates[u].owner {
                        seen[x] = true;
                        prev[x] = Some(u);
                        queue.push_back(x);
                    }
                }
            } else {
                // x ∉ I → y ∈ I when I − y + x stays linearly independent.
                for (y, span) in &spans_without {
                    if seen[*y] {
                        continue;
                    }
                    if !span.contains_vector(&candidates[u].vector) {
                        seen[*y] = true;
                        prev[*y] = Some(u);
                        queue.push_back(*y);
                    }
                }
            }
        }
        let mut node = end?;
        loop {
            chosen[node] = !chosen[node];
            match prev[node] {
                Some(p) => node = p,
                None => break,
            }
        }
        size += 1;
    }

    let mut vectors: Vec<(usize, Vector)> = (0..m)
        .filter(|&e| chosen[e])
        .map(|e| (candidates[e].owner, candidates[e].vector.clone()))
        .collect();
    vectors.sort_by_key(|(i, _)| *i);
    Some(Witness { vectors })
}
