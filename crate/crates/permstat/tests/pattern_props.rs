//! Pattern-counting properties: equivariance under the trivial bijections,
//! adjacency monotonicity, and structural validity of returned occurrence
//! tuples (randomized).

use permstat::pattern::{count_occurrences, occurrences, VincularPattern};
use permstat::perm::{Permutation, TrivialBijection};
use permstat::sets::SetFamily;
use proptest::prelude::*;

fn members(n: usize) -> Vec<Permutation> {
    SetFamily::All
        .spec(n)
        .unwrap()
        .stream()
        .unwrap()
        .collect()
}

/// Every vincular pattern of length at most `max_len`.
fn all_patterns(max_len: usize) -> Vec<VincularPattern> {
    let mut out = Vec::new();
    for m in 1..=max_len {
        for word in SetFamily::All.spec(m).unwrap().stream().unwrap() {
            let slots: Vec<usize> = (1..m).collect();
            for mask in 0..(1u32 << slots.len()) {
                let chosen: Vec<usize> = slots
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &slot)| slot)
                    .collect();
                out.push(VincularPattern::new(word.clone(), &chosen).unwrap());
            }
        }
    }
    out
}

#[test]
fn pattern_universe_has_the_expected_size() {
    // 1 + 2*2 + 6*4 patterns of length <= 3.
    assert_eq!(all_patterns(3).len(), 29);
}

#[test]
fn reverse_and_complement_equivariance_small() {
    let patterns = all_patterns(3);
    for n in 1..=5 {
        for pi in members(n) {
            for pat in &patterns {
                for b in [TrivialBijection::Reverse, TrivialBijection::Complement] {
                    assert_eq!(
                        count_occurrences(&pi.apply_trivial(b), &pat.transform(b).unwrap()),
                        count_occurrences(&pi, pat),
                        "{b} on {pi} / {pat}"
                    );
                }
            }
        }
    }
}

#[test]
fn inversion_equivariance_for_classical_patterns() {
    let classical: Vec<VincularPattern> = (1..=3usize)
        .flat_map(members)
        .map(VincularPattern::classical)
        .collect();
    for n in 1..=7 {
        for pi in members(n) {
            for pat in &classical {
                let inverted = VincularPattern::classical(pat.word().invert());
                assert_eq!(
                    count_occurrences(&pi.invert(), &inverted),
                    count_occurrences(&pi, pat),
                    "invert on {pi} / {pat}"
                );
            }
        }
    }
}

#[test]
fn adding_adjacency_constraints_never_raises_counts() {
    for n in 1..=6 {
        for pi in members(n) {
            for word in SetFamily::All.spec(3).unwrap().stream().unwrap() {
                let masks: [&[usize]; 4] = [&[], &[1], &[2], &[1, 2]];
                let counts: Vec<u64> = masks
                    .iter()
                    .map(|slots| {
                        count_occurrences(
                            &pi,
                            &VincularPattern::new(word.clone(), slots).unwrap(),
                        )
                    })
                    .collect();
                // Superset adjacency can only remove occurrences.
                assert!(counts[1] <= counts[0]);
                assert!(counts[2] <= counts[0]);
                assert!(counts[3] <= counts[1]);
                assert!(counts[3] <= counts[2]);
            }
        }
    }
}

fn arb_permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n).prop_flat_map(|n| {
        Just((1..=n as u32).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|word| {
                Permutation::new(&word.iter().map(|&v| v as i64).collect::<Vec<i64>>()).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn occurrence_tuples_are_structurally_valid(
        pi in arb_permutation(10),
        pattern_idx in 0usize..29,
    ) {
        let pat = &all_patterns(3)[pattern_idx];
        let found = occurrences(&pi, pat);
        // Lexicographically sorted, no duplicates.
        for pair in found.windows(2) {
            prop_assert!(pair[0] < pair[1]);
        }
        for tuple in &found {
            prop_assert!(tuple.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(tuple.iter().all(|&i| 1 <= i && i <= pi.len()));
            for (slot, pair) in tuple.windows(2).enumerate() {
                if pat.adjacency_slots().contains(&(slot + 1)) {
                    prop_assert_eq!(pair[1], pair[0] + 1);
                }
            }
            let values: Vec<i64> = tuple.iter().map(|&i| pi.value_at(i) as i64).collect();
            prop_assert_eq!(&Permutation::reduce(&values).unwrap(), pat.word());
        }
    }

    #[test]
    fn permutation_strings_round_trip(pi in arb_permutation(14)) {
        let text = pi.to_string();
        prop_assert_eq!(text.parse::<Permutation>().unwrap(), pi);
    }
}
