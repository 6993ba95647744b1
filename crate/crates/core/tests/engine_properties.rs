use halftwist::construction::{
    enumerate_even_partitions, modify_insert_singleton, staggered_word, word_from_partition,
    ConstructionError, ConstructionSpec, Powers,
};
use halftwist::engine::{admissibility_check, transition_matrix, AdmissibleCone, TrackFamily};
use halftwist::spectral::{determinant, is_primitive};
use halftwist::catalog;
use halftwist_oracle::replay_word;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{oracle_word, q, sample_admissible, track_matrix};

/// Evenly spaced words for every n in range, plus up to `max_insertions`
/// modifications and the staggered variant where it exists.
fn generated_words(n_max: usize, power: u32, max_insertions: usize) -> Vec<ConstructionSpec> {
    let mut out = Vec::new();
    for n in 4..=n_max {
        for sets in enumerate_even_partitions(n) {
            let mut spec = word_from_partition(&sets, &Powers::Uniform(power)).unwrap();
            for i in 0..=max_insertions {
                if i > 0 {
                    spec = modify_insert_singleton(&spec, power).unwrap();
                }
                match staggered_word(&spec, power) {
                    Ok(st) => out.push(st),
                    Err(ConstructionError::StaggeredOverlap(_)) => {}
                    Err(e) => panic!("unexpected {e}"),
                }
                out.push(spec.clone());
            }
        }
    }
    out
}

#[test]
fn spine_returns_and_matrices_are_unimodular() {
    for spec in generated_words(12, 2, 3) {
        let m = transition_matrix(&spec)
            .unwrap_or_else(|e| panic!("{:?}: {e}", spec.sets()))
            .into_matrix();
        assert!(m.is_nonnegative());
        assert!(determinant(&m).abs().is_one(), "{:?}", spec.sets());
    }
}

#[test]
fn even_partition_power_k_is_positive() {
    let mut counterexamples = Vec::new();
    for n in 4..=12 {
        for sets in enumerate_even_partitions(n) {
            for power in 2..=4 {
                let spec = word_from_partition(&sets, &Powers::Uniform(power)).unwrap();
                let m = transition_matrix(&spec).unwrap().into_matrix();
                let k = sets.len() as u32;
                if !m.pow(k).is_positive() {
                    let e = is_primitive(&m).unwrap().exponent;
                    counterexamples.push(format!("n={n} k={k} power={power} exponent={e:?}"));
                }
            }
        }
    }
    assert!(counterexamples.is_empty(), "M^k not positive: {counterexamples:#?}");
}

#[test]
fn even_partition_matrices_are_primitive() {
    for n in 4..=16 {
        for sets in enumerate_even_partitions(n) {
            let spec = word_from_partition(&sets, &Powers::Uniform(2)).unwrap();
            let m = transition_matrix(&spec).unwrap().into_matrix();
            assert!(is_primitive(&m).unwrap().primitive, "n={n} k={}", sets.len());
        }
    }
}

#[test]
fn uniform_even_partition_matrices_commute_with_the_set_count_shift() {
    for n in 4..=12 {
        for sets in enumerate_even_partitions(n) {
            for power in 2..=3 {
                let spec = word_from_partition(&sets, &Powers::Uniform(power)).unwrap();
                let m = transition_matrix(&spec).unwrap().into_matrix();
                assert_eq!(m.conjugate_by_shift(sets.len()), m, "n={n} k={}", sets.len());
            }
        }
    }
}

#[test]
fn matrix_a_row_four_is_row_one_shifted() {
    let m = transition_matrix(&catalog::phi()).unwrap().into_matrix();
    let shifted: Vec<BigInt> = (0..6).map(|j| m.get(0, (j + 3) % 6).clone()).collect();
    assert_eq!(m.row(3), shifted.as_slice());
}

fn spec_strategy() -> impl Strategy<Value = ConstructionSpec> {
    (4usize..=10)
        .prop_flat_map(|n| {
            let parts = enumerate_even_partitions(n);
            let count = parts.len().max(1);
            (Just(n), 0..count, prop::collection::vec(1u32..=4, n), 0usize..=3, any::<bool>())
        })
        .prop_filter_map("needs a partition", |(n, idx, powers, insertions, staggered)| {
            let sets = enumerate_even_partitions(n).into_iter().nth(idx)?;
            let map = powers.into_iter().enumerate().collect();
            let mut spec = ConstructionSpec::from_partition(&sets, &Powers::PerPuncture(map)).ok()?;
            for _ in 0..insertions.min(10 - n) {
                spec = modify_insert_singleton(&spec, 2).ok()?;
            }
            if staggered {
                if let Ok(st) = staggered_word(&spec, 3) {
                    return Some(st);
                }
            }
            Some(spec)
        })
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(rng.gen_range(-1000i64..=1000))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symbolic_matrix_matches_concrete_replay(spec in spec_strategy(), seed in any::<u64>()) {
        let m = transition_matrix(&spec).unwrap().into_matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            let v = random_vector(&mut rng, spec.n());
            let replayed = replay_word(spec.n(), &oracle_word(&spec), &v).unwrap();
            prop_assert_eq!(m.mul_vec(&v), replayed);
        }
    }

    #[test]
    fn carried_words_have_unit_determinant(spec in spec_strategy()) {
        let m = transition_matrix(&spec).unwrap().into_matrix();
        prop_assert!(determinant(&m).abs().is_one());
        prop_assert!(m.is_nonnegative());
    }
}

#[test]
fn cones_are_preserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for family in TrackFamily::ALL {
        let cone = AdmissibleCone::for_track(family);
        let m = track_matrix(family);
        for _ in 0..100 {
            let v = sample_admissible(family, &mut rng);
            assert!(admissibility_check(&cone, &v).unwrap(), "{family:?} sampler");
            let w = m.mul_vec_rational(&v);
            assert!(admissibility_check(&cone, &w).unwrap(), "{family:?} image of {v:?}");
        }
    }
}

#[test]
fn transcribed_cone_for_c_is_not_invariant() {
    let cone = AdmissibleCone::as_printed(TrackFamily::C);
    let m = track_matrix(TrackFamily::C);
    // a + b + d + f = c + e + g
    let v: Vec<BigRational> = [1u32, 1, 2, 1, 1, 1, 1].iter().map(|&x| q(x, 1)).collect();
    assert!(admissibility_check(&cone, &v).unwrap());
    assert!(!admissibility_check(&cone, &m.mul_vec_rational(&v)).unwrap());
}
