use halftwist::construction::{
    enumerate_even_partitions, modify_insert_singleton, staggered_word, ConstructionSpec, Powers,
};
use halftwist::pipeline::{analyze, classify_obstructions, default_epsilon, ClassificationFlags};
use halftwist::Provenance;
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = ConstructionSpec> {
    (4usize..=9, any::<prop::sample::Index>(), prop::collection::vec(1u32..=3, 9), 0usize..=2, any::<bool>())
        .prop_map(|(n, idx, powers, insertions, staggered)| {
            let parts = enumerate_even_partitions(n);
            let n = if parts.is_empty() { n + 1 } else { n };
            let parts = enumerate_even_partitions(n);
            let sets = &parts[idx.index(parts.len())];
            let map = (0..n).map(|i| (i, powers[i % powers.len()])).collect();
            let mut spec = ConstructionSpec::from_partition(sets, &Powers::PerPuncture(map)).unwrap();
            for _ in 0..insertions {
                spec = modify_insert_singleton(&spec, 2).unwrap();
            }
            if staggered {
                spec = staggered_word(&spec, 2).unwrap_or(spec);
            }
            spec
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reports_are_deterministic_and_certification_is_sound(spec in spec_strategy()) {
        let eps = default_epsilon();
        let a = analyze(&spec, &eps).unwrap();
        let b = analyze(&spec, &eps).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(a.to_markdown(), b.to_markdown());

        let c = &a.certification;
        prop_assert_eq!(c.certified, c.construction_hypothesis && c.powers_at_least_two && c.primitive);
        if a.certified() {
            prop_assert!(a.primitivity.primitive);
            prop_assert!(spec.all_powers_at_least(2));
            prop_assert!(!matches!(spec.provenance(), Provenance::Custom));
        }
        prop_assert_eq!(a.determinant.magnitude().to_string(), "1");

        let flags = classify_obstructions(&a);
        prop_assert_eq!(flags, a.classification);
        prop_assert_eq!(
            flags,
            ClassificationFlags::from_invariants(a.trace_field.unit_circle_pairs, a.trace_field.totally_real)
        );
        prop_assert_eq!(flags.neither_construction, flags.penner_excluded && flags.thurston_excluded);
    }
}

#[test]
fn classification_depends_only_on_its_two_inputs() {
    for pairs in 0..4 {
        for real in [false, true] {
            let f = ClassificationFlags::from_invariants(pairs, real);
            assert_eq!(f.penner_excluded, pairs >= 1);
            assert_eq!(f.thurston_excluded, !real);
            assert_eq!(f, ClassificationFlags::from_invariants(pairs, real));
        }
    }
}
