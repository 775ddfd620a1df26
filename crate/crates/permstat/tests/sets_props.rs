//! Enumeration properties at the ranges the generator is contracted for:
//! agreement with filtering, and the Catalan cardinality of the
//! maximum-first 231-avoiders.

use permstat::perm::Permutation;
use permstat::sets::{catalan, SetFamily};

#[test]
fn enumeration_matches_filtering_for_every_spec_kind() {
    for family in ["all", "av:2-3-1", "av:3-1-2,2-1-3", "avp:231"] {
        let parsed = SetFamily::parse(family).unwrap();
        for n in 1..=8 {
            let spec = parsed.spec(n).unwrap();
            let enumerated: Vec<Permutation> = spec.stream().unwrap().collect();
            let filtered: Vec<Permutation> = SetFamily::All
                .spec(n)
                .unwrap()
                .stream()
                .unwrap()
                .filter(|pi| spec.contains(pi).unwrap())
                .collect();
            assert_eq!(enumerated, filtered, "{family} at n={n}");
        }
    }
}

#[test]
fn maximum_first_avoiders_count_catalan_shifted() {
    for n in 1..=10usize {
        let spec = SetFamily::AvPrime231.spec(n).unwrap();
        let count = spec.stream().unwrap().count() as u64;
        assert_eq!(count, catalan(n - 1), "n={n}");
    }
}
