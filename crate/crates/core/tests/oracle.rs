mod common;

use std::collections::BTreeSet;

use common::*;
use supercharacter::enumerate::{all_scts, brute_force_all_scts};
use supercharacter::{Partition, SuperTheory};

#[test]
fn counts_match_frozen_values() {
    for name in ALL {
        let t = fixture(name);
        let result = all_scts(&t, true).unwrap();
        assert_eq!(result.theories.len(), expected_count(name), "{name}");
    }
}

#[test]
fn class_partitions_match_frozen_values() {
    for (name, expected) in EXPECTED_CLASSES {
        let t = fixture(name);
        let found: BTreeSet<Partition> =
            all_scts(&t, true).unwrap().theories.iter().map(|th| th.classes().clone()).collect();
        let expected: BTreeSet<Partition> = expected.iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(found, expected, "{name}");
    }
}

#[test]
fn enumeration_agrees_with_brute_force() {
    for name in SMALL {
        let t = fixture(name);
        let oracle = brute_force_all_scts(&t, 8).unwrap();
        for use_auts in [false, true] {
            assert_eq!(all_scts(&t, use_auts).unwrap().theories, oracle, "{name} use_auts={use_auts}");
        }
    }
}

#[test]
fn brute_force_agrees_with_the_definition() {
    for name in ["c2", "c3", "c4", "c5", "s3", "d8", "q8", "a4", "a5", "psl2_7"] {
        let t = fixture(name);
        let definitional = definitional_theories(&t);
        let oracle: BTreeSet<(Vec<usize>, Vec<usize>)> = brute_force_all_scts(&t, 8)
            .unwrap()
            .iter()
            .map(|th| (th.chars().labels(), th.classes().labels()))
            .collect();
        assert_eq!(oracle, definitional, "{name}");
        assert_eq!(definitional.len(), expected_count(name), "{name}");
    }
}

#[test]
fn automorphism_pruning_changes_nothing() {
    for name in ["psl2_7", "a7", "m11", "c7"] {
        let t = fixture(name);
        let plain = all_scts(&t, false).unwrap();
        let pruned = all_scts(&t, true).unwrap();
        assert_eq!(plain.theories, pruned.theories, "{name}");
        assert!(pruned.stats.subsets_scanned <= plain.stats.subsets_scanned);
    }
}

#[test]
fn output_is_sorted_and_contains_extremes() {
    for name in ALL {
        let t = fixture(name);
        let theories = all_scts(&t, true).unwrap().theories;
        assert!(theories.windows(2).all(|w| w[0] < w[1]), "{name}");
        assert_eq!(theories.first(), Some(&SuperTheory::coarse(t.k())), "{name}");
        assert_eq!(theories.last(), Some(&SuperTheory::finest(t.k())), "{name}");
    }
}
