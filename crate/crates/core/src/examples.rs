//! Small reference tuples used throughout the tests and benches.

use crate::linalg::FieldSpec;
use crate::tuple::SubspaceTuple;

/// `(L₁, L₁′, L₂)` with `L₁ = L₁′ = ⟨e₁⟩ ⊂ L₂ = Q²`.
pub fn ex1() -> SubspaceTuple {
    SubspaceTuple::from_integer_rows(
        FieldSpec::Rationals,
        2,
        &[vec![vec![1, 0]], vec![vec![1, 0]], vec![vec![1, 0], vec![0, 1]]],
    )
    .expect("valid tuple")
}

/// `(L₁, L₁′, L₃)` with `L₁ = L₁′ = ⟨e₁⟩ ⊂ L₃ = Q³`.
pub fn ex2() -> SubspaceTuple {
    SubspaceTuple::from_integer_rows(
        FieldSpec::Rationals,
        3,
        &[
            vec![vec![1, 0, 0]],
            vec![vec![1, 0, 0]],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        ],
    )
    .expect("valid tuple")
}

/// `(⟨e₁⟩, ⟨e₂, e₃⟩, Q³)`.
pub fn ex3() -> SubspaceTuple {
    SubspaceTuple::from_integer_rows(
        FieldSpec::Rationals,
        3,
        &[
            vec![vec![1, 0, 0]],
            vec![vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        ],
    )
    .expect("valid tuple")
}

/// The three lines of GF(2)².
pub fn der1() -> SubspaceTuple {
    SubspaceTuple::from_integer_rows(
        FieldSpec::Prime(2),
        2,
        &[vec![vec![1, 0]], vec![vec![0, 1]], vec![vec![1, 1]]],
    )
    .expect("valid tuple")
}

/// A full flag `⟨e₁⟩ ⊂ ⟨e₁,e₂⟩ ⊂ … ⊂ Kⁿ`.
pub fn flag(field: FieldSpec, n: usize) -> SubspaceTuple {
    let gens: Vec<Vec<Vec<i64>>> = (1..=n)
        .map(|k| {
            (0..k)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect()
        })
        .collect();
    SubspaceTuple::from_integer_rows(field, n, &gens).expect("valid tuple")
}
