//! Exact scalar fields: the rationals and prime fields GF(p).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest accepted prime modulus. Products of two residues must fit in `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// The ground field of a subspace tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

/// An exact field element. Residues are always stored reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// GF(p), rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Residue(1),
        }
    }

    /// Image of an integer; reduced mod p for prime fields.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Residue(v.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(&n, &self.inv(&d)))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue((x + y) % p)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(x * y % p)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue(pow_mod(*x, p - 2, *p)),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Whether `a` is an element of this field.
    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::Prime(p), Scalar::Residue(x)) => x < p,
            _ => false,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Residue(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_one(),
            Scalar::Residue(x) => *x == 1,
        }
    }

    /// Denominator of a rational scalar; 1 for residues.
    pub(crate) fn denominator(&self) -> BigInt {
        match self {
            Scalar::Rational(x) => x.denom().clone(),
            Scalar::Residue(_) => BigInt::one(),
        }
    }

    /// Integer numerator after scaling by `factor` (which must clear the denominator).
    pub(crate) fn scaled_integer(&self, factor: &BigInt) -> BigInt {
        match self {
            Scalar::Rational(x) => {
                let scaled = x * BigRational::from_integer(factor.clone());
                debug_assert!(scaled.is_integer());
                scaled.to_integer()
            }
            Scalar::Residue(x) => BigInt::from(*x),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(x) if x.is_negative())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(x) => write!(f, "{x}"),
            Scalar::Residue(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_moduli() {
        assert!(matches!(FieldSpec::prime(4), Err(Error::NotPrime(4))));
        assert!(matches!(FieldSpec::prime(1), Err(Error::NotPrime(1))));
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(7919).is_ok());
        assert!(FieldSpec::prime(7917).is_err());
    }

    #[test]
    fn residue_inverse() {
        let f = FieldSpec::prime(7).unwrap();
        for v in 1..7 {
            let x = f.from_i64(v);
            assert!(f.mul(&x, &f.inv(&x)).is_one());
        }
        assert_eq!(f.from_i64(-1), Scalar::Residue(6));
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let q = FieldSpec::Rationals;
        let third = q.from_ratio(1, 3).unwrap();
        let sum = q.add(&q.add(&third, &third), &third);
        assert!(sum.is_one());
        assert!(matches!(q.from_ratio(1, 0), Err(Error::DivisionByZero)));
    }
}
