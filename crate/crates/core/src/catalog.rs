//! The worked constructions on six, seven and eight punctures, all with
//! every power equal to 2.

use crate::construction::{modify_insert_singleton, word_from_partition, ConstructionSpec, Powers};

fn even(sets: &[Vec<usize>]) -> ConstructionSpec {
    word_from_partition(sets, &Powers::Uniform(2)).expect("catalog partition is valid")
}

fn modified(base: ConstructionSpec, times: usize) -> ConstructionSpec {
    (0..times).fold(base, |s, _| modify_insert_singleton(&s, 2).expect("catalog base is valid"))
}

/// `{{0,3},{1,4},{2,5}}` on six punctures (matrix A).
pub fn phi() -> ConstructionSpec {
    even(&[vec![0, 3], vec![1, 4], vec![2, 5]])
}

/// `{{0,2,4},{1,3,5}}` on six punctures (matrix B).
pub fn phi_bar() -> ConstructionSpec {
    even(&[vec![0, 2, 4], vec![1, 3, 5]])
}

/// One singleton insertion into [`phi`] (matrix C).
pub fn phi_prime() -> ConstructionSpec {
    modified(phi(), 1)
}

/// One singleton insertion into [`phi_bar`] (matrix D).
pub fn phi_bar_prime() -> ConstructionSpec {
    modified(phi_bar(), 1)
}

/// Two insertions into [`phi`] on eight punctures (matrix M).
pub fn psi() -> ConstructionSpec {
    modified(phi(), 2)
}

/// Two insertions into [`phi_bar`] on eight punctures (matrix M').
pub fn psi_prime() -> ConstructionSpec {
    modified(phi_bar(), 2)
}

/// Every catalog entry with a short name.
pub fn all() -> Vec<(&'static str, ConstructionSpec)> {
    vec![
        ("phi", phi()),
        ("phi_bar", phi_bar()),
        ("phi_prime", phi_prime()),
        ("phi_bar_prime", phi_bar_prime()),
        ("psi", psi()),
        ("psi_prime", psi_prime()),
    ]
}
