use std::collections::BTreeSet;

use super::flats::{find_m3, find_n5};
use crate::error::{Error, Result};
use crate::linalg::{invert, Matrix, Subspace};
use crate::tuple::SubspaceTuple;

/// Limit on the number of members of a generated subspace lattice.
pub const GENERATED_LATTICE_CAP: usize = 1 << 16;

/// `V = ⊕ V_α` with every entry a sum of blocks, and a basis adapted to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumDecomposition {
    pub blocks: Vec<Subspace>,
    /// For each entry, the positions of the blocks it is the sum of.
    pub membership: Vec<Vec<usize>>,
    /// New basis vectors in old coordinates, block by block.
    pub basis: Matrix,
    /// Maps old coordinates to new ones.
    pub transform: Matrix,
}

/// A basis in which every entry is a coordinate subspace, if one exists.
///
/// One exists exactly when the lattice generated by `0`, `V` and the entries
/// under `+` and `∩` is distributive, which is tested by searching it for a
/// diamond or a pentagon. The blocks are complements `X⁻ ⊕ C_X = X` over its
/// join-irreducible members `X`, where `X⁻` is the sum of members strictly
/// below `X`.
pub fn distributive_decomposition(t: &SubspaceTuple) -> Result<Option<DirectSumDecomposition>> {
    let f = t.field();
    let d = t.ambient_dim();
    let Some(lattice) = generated_lattice(t)? else {
        return Ok(None);
    };
    let pos = |s: &Subspace| lattice.binary_search(s).expect("lattice is closed");
    let k = lattice.len();
    let mut meet = vec![vec![0; k]; k];
    let mut join = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            meet[a][b] = pos(&lattice[a].intersect(&lattice[b])?);
            join[a][b] = pos(&lattice[a].sum(&lattice[b])?);
        }
    }
    if find_m3(&meet, &join).is_some() || find_n5(&meet, &join).is_some() {
        return Ok(None);
    }

    let mut blocks = Vec::new();
    for x in &lattice {
        if x.is_zero() {
            continue;
        }
        let mut below = Subspace::zero(f, d);
        for y in &lattice {
            if y != x && y.is_subspace_of(x) {
                below = below.sum(y)?;
            }
        }
        if below == *x {
            continue;
        }
        let rows = x
            .basis()
            .iter()
            .scan(below.clone(), |acc, v| {
                if acc.contains_vector(v) {
                    return Some(None);
                }
                let line = Subspace::new(f, d, vec![v.clone()]).expect("row of width d");
                *acc = acc.sum(&line).expect("same ambient space");
                Some(Some(v.clone()))
            })
            .flatten()
            .collect();
        blocks.push(Subspace::new(f, d, rows)?);
    }

    let basis: Matrix = blocks.iter().flat_map(|b| b.basis().iter().cloned()).collect();
    let columns: Matrix = (0..d)
        .map(|r| basis.iter().map(|v| v[r].clone()).collect())
        .collect();
    let inverse = if basis.len() == d { invert(&f, &columns) } else { None };
    let transform = match inverse {
        Some(m) => m,
        None => {
            return Err(Error::Verification(format!(
                "blocks of total dimension {} do not form a direct sum of {f}^{d}",
                basis.len()
            )))
        }
    };

    let mut membership = Vec::with_capacity(t.len());
    for (i, e) in t.entries().iter().enumerate() {
        let inside: Vec<usize> = (0..blocks.len())
            .filter(|&b| blocks[b].is_subspace_of(e))
            .collect();
        let total: usize = inside.iter().map(|&b| blocks[b].dim()).sum();
        if total != e.dim() {
            return Err(Error::Verification(format!(
                "entry {i} is not a sum of blocks"
            )));
        }
        membership.push(inside);
    }
    let mapped = t.map(&transform)?;
    if let Some(i) = mapped.entries().iter().position(|e| !e.is_coordinate()) {
        return Err(Error::Verification(format!(
            "entry {i} is not coordinate in the adapted basis"
        )));
    }
    Ok(Some(DirectSumDecomposition {
        blocks,
        membership,
        basis,
        transform,
    }))
}

/// The closure of `{0, V, L_1, .., L_n}` under sum and intersection, sorted,
/// or `None` once it outgrows `2^d` members, the most a distributive lattice
/// of subspaces of a `d`-dimensional space can have.
fn generated_lattice(t: &SubspaceTuple) -> Result<Option<Vec<Subspace>>> {
    let f = t.field();
    let d = t.ambient_dim();
    let bound = u32::try_from(d)
        .ok()
        .and_then(|d| 1usize.checked_shl(d))
        .unwrap_or(usize::MAX);
    let mut members: BTreeSet<Subspace> = t.entries().iter().cloned().collect();
    members.insert(Subspace::zero(f, d));
    members.insert(Subspace::full(f, d));
    let mut frontier: Vec<Subspace> = members.iter().cloned().collect();
    while !frontier.is_empty() {
        let current: Vec<Subspace> = members.iter().cloned().collect();
        let mut fresh = Vec::new();
        for a in &frontier {
            for b in &current {
                for c in [a.sum(b)?, a.intersect(b)?] {
                    if !members.contains(&c) {
                        members.insert(c.clone());
                        fresh.push(c);
                    }
                }
            }
            if members.len() > bound {
                return Ok(None);
            }
            if members.len() > GENERATED_LATTICE_CAP {
                return Err(Error::Verification(format!(
                    "generated subspace lattice exceeds {GENERATED_LATTICE_CAP} members"
                )));
            }
        }
        frontier = fresh;
    }
    Ok(Some(members.into_iter().collect()))
}
