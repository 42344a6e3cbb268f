use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

pub type Vector = Vec<Scalar>;
pub type Matrix = Vec<Vector>;

/// Row-reduces `rows` in place to reduced row-echelon form, drops zero rows,
/// and returns the pivot columns.
pub fn rref(field: &FieldSpec, rows: &mut Matrix, width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(&rows[r][col]);
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(col) {
                *x = field.mul(x, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = field.sub(x, &field.mul(&factor, p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a list of vectors of length `width`.
pub fn rank(field: &FieldSpec, rows: &[Vector], width: usize) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m, width).len()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(field: &FieldSpec, m: &[Vector]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix is not square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(field, &mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `m · v` for a matrix given by rows.
pub fn apply(field: &FieldSpec, m: &[Vector], v: &[Scalar]) -> Vector {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    field.add(&acc, &field.mul(a, b))
                }
            })
        })
        .collect()
}

/// A vector subspace of `field^ambient_dim`, stored as its RREF row basis.
///
/// Equal subspaces have identical representations, so derived equality is
/// subspace equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of `rows`, canonicalized.
    pub fn new(field: FieldSpec, ambient_dim: usize, rows: Matrix) -> Result<Self> {
        for row in &rows {
            if row.len() != ambient_dim {
                return Err(Error::RowLength {
                    expected: ambient_dim,
                    found: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|x| !field.contains(x)) {
                return Err(Error::AmbientMismatch {
                    left: field.to_string(),
                    right: format!("scalar {bad}"),
                });
            }
        }
        Ok(Self::from_rows_unchecked(field, ambient_dim, rows))
    }

    fn from_rows_unchecked(field: FieldSpec, ambient_dim: usize, mut rows: Matrix) -> Self {
        let pivots = rref(&field, &mut rows, ambient_dim);
        Subspace {
            field,
            ambient_dim,
            basis: rows,
            pivots,
        }
    }

    /// Span of integer rows (reduced mod p over a prime field).
    pub fn from_integers(field: FieldSpec, ambient_dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::new(field, ambient_dim, rows)
    }

    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Self::coordinate(field, ambient_dim, 0..ambient_dim)
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(
        field: FieldSpec,
        ambient_dim: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        let rows = indices
            .into_iter()
            .map(|i| unit(&field, ambient_dim, i))
            .collect();
        Self::from_rows_unchecked(field, ambient_dim, rows)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field || self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: format!("{}^{}", self.field, self.ambient_dim),
                right: format!("{}^{}", other.field, other.ambient_dim),
            });
        }
        Ok(())
    }

    /// Reduces `v` against the basis; the result vanishes on every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let factor = r[p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = self.field.sub(x, &self.field.mul(&factor, b));
                }
            }
        }
        r
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.field == other.field
            && self.ambient_dim == other.ambient_dim
            && self.basis.iter().all(|b| other.contains_vector(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if other.is_zero() || self == other {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::from_rows_unchecked(self.field, self.ambient_dim, rows))
    }

    /// Intersection by the Zassenhaus algorithm: row-reduce `[A | A; B | 0]`
    /// and read the intersection off the rows with a vanishing left half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let d = self.ambient_dim;
        let f = self.field;
        let mut rows: Matrix = self
            .basis
            .iter()
            .map(|a| a.iter().chain(a).cloned().collect())
            .chain(other.basis.iter().map(|b| {
                let mut r = b.clone();
                r.extend(std::iter::repeat_n(f.zero(), d));
                r
            }))
            .collect();
        let pivots = rref(&f, &mut rows, 2 * d);
        let inter = rows
            .into_iter()
            .zip(pivots)
            .filter(|&(_, p)| p >= d)
            .map(|(r, _)| r[d..].to_vec())
            .collect();
        Ok(Self::from_rows_unchecked(f, d, inter))
    }

    /// Annihilator under the standard coordinate pairing.
    pub fn orthogonal_complement(&self) -> Subspace {
        let f = self.field;
        let d = self.ambient_dim;
        let mut is_pivot = vec![false; d];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let rows = (0..d)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![f.zero(); d];
                x[free] = f.one();
                for (row, &p) in self.basis.iter().zip(&self.pivots) {
                    x[p] = f.neg(&row[free]);
                }
                x
            })
            .collect();
        Self::from_rows_unchecked(f, d, rows)
    }

    /// Whether the subspace is spanned by standard basis vectors.
    pub fn is_coordinate(&self) -> bool {
        self.basis
            .iter()
            .all(|row| row.iter().filter(|x| !x.is_zero()).count() == 1)
    }

    /// Image under the linear map with the given rows (`v ↦ m·v`).
    pub fn map(&self, m: &[Vector]) -> Result<Subspace> {
        if let Some(row) = m.iter().find(|r| r.len() != self.ambient_dim) {
            return Err(Error::RowLength {
                expected: self.ambient_dim,
                found: row.len(),
            });
        }
        let rows = self.basis.iter().map(|b| apply(&self.field, m, b)).collect();
        Ok(Self::from_rows_unchecked(self.field, m.len(), rows))
    }

    /// Basis rows scaled to integer vectors; spans the same subspace.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.basis
            .iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, x| {
                    let d = x.denominator();
                    num_integer_lcm(&acc, &d)
                });
                row.iter().map(|x| x.scaled_integer(&lcm)).collect()
            })
            .collect()
    }
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_traits::Zero;
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let t = &x % &y;
        x = y;
        y = t;
    }
    a / &x * b
}

pub(crate) fn unit(field: &FieldSpec, d: usize, i: usize) -> Vector {
    (0..d)
        .map(|j| if i == j { field.one() } else { field.zero() })
        .collect()
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, row) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "> in {}^{}", self.field, self.ambient_dim)
    }
}

/// The projection `V → V/K`, using the non-pivot coordinates of `K`'s RREF
/// as quotient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientContext {
    kernel: Subspace,
    free_columns: Vec<usize>,
    projection: Matrix,
}

impl QuotientContext {
    pub fn new(ambient_dim: usize, kernel: &Subspace) -> Result<Self> {
        if kernel.ambient_dim != ambient_dim {
            return Err(Error::AmbientMismatch {
                left: format!("ambient dimension {ambient_dim}"),
                right: format!("{}^{}", kernel.field, kernel.ambient_dim),
            });
        }
        let f = kernel.field;
        let mut is_pivot = vec![false; ambient_dim];
        for &p in &kernel.pivots {
            is_pivot[p] = true;
        }
        let free_columns: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
        // Column j of the projection is the image of e_j.
        let images: Vec<Vector> = (0..ambient_dim)
            .map(|j| {
                let r = kernel.reduce(&unit(&f, ambient_dim, j));
                free_columns.iter().map(|&c| r[c].clone()).collect()
            })
            .collect();
        let projection = (0..free_columns.len())
            .map(|i| images.iter().map(|col| col[i].clone()).collect())
            .collect();
        Ok(QuotientContext {
            kernel: kernel.clone(),
            free_columns,
            projection,
        })
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn quotient_dim(&self) -> usize {
        self.free_columns.len()
    }

    /// Rows map ambient coordinates to quotient coordinates.
    pub fn projection(&self) -> &[Vector] {
        &self.projection
    }

    pub fn project_vector(&self, v: &[Scalar]) -> Vector {
        let r = self.kernel.reduce(v);
        self.free_columns.iter().map(|&c| r[c].clone()).collect()
    }

    pub fn project(&self, s: &Subspace) -> Result<Subspace> {
        self.kernel.check_compatible(s)?;
        let rows = s.basis.iter().map(|b| self.project_vector(b)).collect();
        Ok(Subspace::from_rows_unchecked(
            s.field,
            self.quotient_dim(),
            rows,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }
    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }
    fn sub(f: FieldSpec, d: usize, rows: &[&[i64]]) -> Subspace {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::from_integers(f, d, &rows).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let s = sub(q(), 2, &[&[1, 0], &[1, 0]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s, sub(q(), 2, &[&[1, 0]]));

        let z = Subspace::new(q(), 3, vec![]).unwrap();
        assert_eq!(z.dim(), 0);
        assert!(z.is_zero());

        // over GF(2): (1,1),(0,1) reduces to the identity
        let s = sub(gf(2), 2, &[&[1, 1], &[0, 1]]);
        assert_eq!(s.basis(), &[vec![Scalar::Residue(1), Scalar::Residue(0)], vec![Scalar::Residue(0), Scalar::Residue(1)]]);
    }

    #[test]
    fn canonicalize_rejects_ragged_rows() {
        let r = Subspace::from_integers(q(), 2, &[vec![1, 0], vec![1]]);
        assert_eq!(r, Err(Error::RowLength { expected: 2, found: 1 }));
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        let a = sub(q(), 3, &[&[1, 2, 3], &[0, 1, 1]]);
        let b = sub(q(), 3, &[&[1, 3, 4], &[2, 5, 7], &[3, 7, 10]]);
        assert_eq!(a, b);
        let c = Subspace::new(q(), 3, a.basis().to_vec()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn sum_examples() {
        let e1 = sub(q(), 3, &[&[1, 0, 0]]);
        assert_eq!(e1.sum(&e1).unwrap(), e1);
        let e23 = sub(q(), 3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(e1.sum(&e23).unwrap(), Subspace::full(q(), 3));
        let a = sub(gf(2), 2, &[&[1, 0]]);
        let b = sub(gf(2), 2, &[&[1, 1]]);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
    }

    #[test]
    fn mismatched_ambients_are_rejected() {
        let a = Subspace::zero(q(), 2);
        let b = Subspace::zero(q(), 3);
        let c = Subspace::zero(gf(2), 2);
        assert!(a.sum(&b).is_err());
        assert!(a.intersect(&c).is_err());
    }

    #[test]
    fn intersect_examples() {
        let e1 = sub(q(), 3, &[&[1, 0, 0]]);
        let e12 = sub(q(), 3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(e1.intersect(&e12).unwrap(), e1);
        let e2 = sub(q(), 3, &[&[0, 1, 0]]);
        assert!(e1.intersect(&e2).unwrap().is_zero());
        let plane = Subspace::full(gf(2), 2);
        let diag = sub(gf(2), 2, &[&[1, 1]]);
        assert_eq!(plane.intersect(&diag).unwrap(), diag);
    }

    #[test]
    fn quotient_examples() {
        let e1 = sub(q(), 3, &[&[1, 0, 0]]);
        let ctx = QuotientContext::new(3, &e1).unwrap();
        assert_eq!(ctx.project(&Subspace::full(q(), 3)).unwrap().dim(), 2);
        assert!(ctx.project(&e1).unwrap().is_zero());

        let e1 = sub(q(), 2, &[&[1, 0]]);
        let ctx = QuotientContext::new(2, &e1).unwrap();
        let img = ctx.project(&e1).unwrap();
        assert!(img.is_zero());
        assert_eq!(img.ambient_dim(), 1);

        assert!(QuotientContext::new(3, &Subspace::zero(q(), 2)).is_err());
    }

    #[test]
    fn complement_examples() {
        let e1 = sub(q(), 2, &[&[1, 0]]);
        assert_eq!(e1.orthogonal_complement(), sub(q(), 2, &[&[0, 1]]));
        assert!(Subspace::full(q(), 2).orthogonal_complement().is_zero());
        let diag = sub(gf(2), 2, &[&[1, 1]]);
        assert_eq!(diag.orthogonal_complement(), diag);
    }

    #[test]
    fn inverse_round_trip() {
        let f = q();
        let m: Matrix = vec![
            vec![f.from_i64(1), f.from_i64(1)],
            vec![f.from_i64(1), f.from_i64(0)],
        ];
        let inv = invert(&f, &m).unwrap();
        assert_eq!(apply(&f, &inv, &[f.from_i64(1), f.from_i64(1)]), vec![f.one(), f.zero()]);
        let singular: Matrix = vec![vec![f.one(), f.one()], vec![f.one(), f.one()]];
        assert!(invert(&f, &singular).is_none());
    }

    #[test]
    fn integer_rows_clear_denominators() {
        let f = q();
        let s = Subspace::new(f, 2, vec![vec![f.from_i64(2), f.from_i64(1)]]).unwrap();
        // RREF is (1, 1/2)
        let rows = s.integer_rows();
        assert_eq!(rows, vec![vec![BigInt::from(2), BigInt::from(1)]]);
    }
}
