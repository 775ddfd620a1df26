//! Acceptance suite: every headline property of the library, exhaustively at
//! desk scale, one test per criterion. Each test prints a single PASS line
//! (visible with `--nocapture`); a failing assertion is the FAIL line.
//!
//! Run with `cargo test -p permstat-cli --test acceptance`.

use std::collections::BTreeSet;
use std::process::Command;

use permstat::bijections::{self, ConsistentPair};
use permstat::dist::{distribution, distribution_with};
use permstat::pattern::{self, count_occurrences, VincularPattern};
use permstat::perm::Permutation;
use permstat::qpoly::{equidistributed, q_factorial};
use permstat::sets::{catalan, SetFamily};
use permstat::stats::{self, StatValue};

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn members(family: &str, n: usize) -> Vec<Permutation> {
    SetFamily::parse(family)
        .unwrap()
        .spec(n)
        .unwrap()
        .stream()
        .unwrap()
        .collect()
}

fn stat(name: &str, pi: &Permutation) -> u64 {
    stats::lookup(name).unwrap().eval_count(pi)
}

#[test]
fn a01_worked_examples_are_byte_exact() {
    assert_eq!(
        bijections::theta_prime(&p("7642135")).unwrap().to_string(),
        "7216435"
    );
    assert_eq!(
        bijections::theta1(&p("7642135")).unwrap().to_string(),
        "((3,2,2),(7,6,5))"
    );
    assert_eq!(
        p("7651324").inverse_descent_runs(),
        vec![vec![1, 2, 3, 7], vec![5, 6], vec![4]]
    );
    let pi = p("4235167");
    assert_eq!(pi.reverse().to_string(), "7615324");
    assert_eq!(pi.complement().to_string(), "4653721");
    assert_eq!(pi.invert().to_string(), "5231467");
    println!("criterion 01 (worked examples): PASS");
}

#[test]
fn a02_mahonian_statistics_distribute_as_q_factorials() {
    let names = ["inv", "maj", "makl", "bast", "foze", "fozepp"];
    for n in 1..=8usize {
        let expected = q_factorial(n).unwrap();
        let spec = SetFamily::All.spec(n).unwrap();
        for name in names {
            let dist = distribution(&spec, name).unwrap();
            assert_eq!(dist, expected, "{name} over S_{n}");
            // Each vincular-pattern expression row is Mahonian on its own;
            // for inv and maj this exercises the route the registry does not
            // take.
            let terms = stats::vincular_expression(name).unwrap();
            let via_patterns =
                distribution_with(&spec, |pi| pattern::pattern_sum(pi, terms)).unwrap();
            assert_eq!(via_patterns, expected, "{name} expression over S_{n}");
        }
    }
    println!("criterion 02 (Mahonity over S_n, n <= 8): PASS");
}

#[test]
fn a03_length_three_avoidance_classes_have_catalan_size() {
    for sigma in ["1-2-3", "1-3-2", "2-1-3", "2-3-1", "3-1-2", "3-2-1"] {
        let family = SetFamily::parse(&format!("av:{sigma}")).unwrap();
        for n in 1..=10usize {
            let count = family.spec(n).unwrap().stream().unwrap().count() as u64;
            assert_eq!(count, catalan(n), "|S_{n}({sigma})|");
        }
    }
    println!("criterion 03 (Catalan cardinalities, n <= 10): PASS");
}

#[test]
fn a04_theta_transforms_maj_to_makl_bijectively() {
    // The preserved right-to-left extreme sets are the value sets (Rmaxl,
    // Rminl): run lengths pin the value blocks. The position sets move, e.g.
    // 4132 -> 4312 sends the maxima positions {1,3,4} to {1,2,4}.
    let rmaxl = stats::lookup("Rmaxl").unwrap();
    let rminl = stats::lookup("Rminl").unwrap();
    for n in 1..=9usize {
        let mut images = BTreeSet::new();
        let set = members("av:2-3-1", n);
        for pi in &set {
            let tau = bijections::theta(pi).unwrap();
            assert_eq!(stat("maj", pi), stat("makl", &tau), "{pi}");
            assert_eq!(rmaxl.eval(pi), rmaxl.eval(&tau), "{pi}");
            assert_eq!(rminl.eval(pi), rminl.eval(&tau), "{pi}");
            images.insert(tau);
        }
        // Injective into the same class of equal size: a bijection.
        assert_eq!(images.len(), set.len(), "theta not injective at n={n}");
        let class: BTreeSet<Permutation> = set.into_iter().collect();
        assert!(images.is_subset(&class), "theta leaves Av(231) at n={n}");
    }
    println!("criterion 04 (theta: maj -> makl on Av(231), n <= 9): PASS");
}

#[test]
fn a05_big_theta_transforms_bast_to_foze() {
    for n in 1..=9usize {
        let mut images = BTreeSet::new();
        let set = members("av:3-1-2", n);
        for pi in &set {
            let tau = bijections::big_theta(pi).unwrap();
            assert_eq!(stat("bast", pi), stat("foze", &tau), "{pi}");
            images.insert(tau);
        }
        assert_eq!(images.len(), set.len(), "big_theta not injective at n={n}");
        let class: BTreeSet<Permutation> = set.into_iter().collect();
        assert!(images.is_subset(&class), "big_theta leaves Av(312) at n={n}");

        let spec = SetFamily::parse("av:3-1-2").unwrap().spec(n).unwrap();
        let bast = distribution(&spec, "bast").unwrap();
        let foze = distribution(&spec, "foze").unwrap();
        assert!(equidistributed(&bast, &foze), "polynomials differ at n={n}");
    }
    println!("criterion 05 (big_theta: bast -> foze on Av(312), n <= 9): PASS");
}

#[test]
fn a06_psi_transforms_fozepp_to_inv() {
    let p321: VincularPattern = "3-2-1".parse().unwrap();
    for n in 1..=9usize {
        for pi in members("av:3-1-2", n) {
            let tau = bijections::psi(&pi).unwrap();
            assert!(!pattern::contains_pattern(&tau, &p321), "{pi} -> {tau}");
            assert_eq!(stat("fozepp", &pi), stats::inv(&tau), "{pi}");
        }
    }
    println!("criterion 06 (psi: fozepp -> inv into Av(321), n <= 9): PASS");
}

#[test]
fn a07_closed_forms_match_brute_force_on_their_whole_domains() {
    let adj213: VincularPattern = "2-13".parse().unwrap();
    let adj231: VincularPattern = "23-1".parse().unwrap();
    let fozepp_terms = stats::vincular_expression("fozepp").unwrap();
    for n in 1..=9usize {
        for pi in members("av:2-3-1", n) {
            assert_eq!(
                stats::adj213_on_av231(&pi).unwrap(),
                count_occurrences(&pi, &adj213),
                "{pi}"
            );
        }
        for pi in members("av:3-2-1", n) {
            assert_eq!(stats::inv_on_av321(&pi).unwrap(), stats::inv(&pi), "{pi}");
        }
        for pi in members("av:3-1-2", n) {
            for i in 1..=n {
                assert_eq!(
                    stats::inv_at_on_av312(&pi, i).unwrap(),
                    stats::inv_at(&pi, i).unwrap(),
                    "{pi} at {i}"
                );
            }
            assert_eq!(
                stats::adj231_on_av312(&pi).unwrap(),
                count_occurrences(&pi, &adj231),
                "{pi}"
            );
            assert_eq!(
                stats::des_on_av312(&pi).unwrap(),
                pi.descent_positions().len() as u64,
                "{pi}"
            );
            assert_eq!(
                stats::fozepp_on_av312(&pi).unwrap(),
                pattern::pattern_sum(&pi, fozepp_terms),
                "{pi}"
            );
        }
    }
    println!("criterion 07 (closed forms on full precondition sets, n <= 9): PASS");
}

#[test]
fn a08_stack_construction_satisfies_its_contract() {
    let p231: VincularPattern = "2-3-1".parse().unwrap();
    for n in 1..=9usize {
        for pair in ConsistentPair::enumerate_all(n) {
            // Debug assertions inside the construction watch the input
            // stack's monotonicity; any violation panics this test.
            let pi = bijections::theta2(&pair);
            assert_eq!(pi.len(), n, "{pair}");
            assert!(!pattern::contains_pattern(&pi, &p231), "{pair} -> {pi}");
            assert_eq!(pi.value_at(1) as usize, n, "{pair} -> {pi}");
            let StatValue::Values(atop) = stats::eval_stat("Atop", &pi).unwrap() else {
                unreachable!()
            };
            let mut expected_tops: Vec<u32> = pair.thresholds()[1..].to_vec();
            expected_tops.sort_unstable();
            assert_eq!(atop, expected_tops, "{pair} -> {pi}");
            let lengths: Vec<u32> = pi
                .inverse_descent_runs()
                .iter()
                .map(|run| run.len() as u32)
                .collect();
            assert_eq!(lengths, pair.run_lengths(), "{pair} -> {pi}");
        }
    }
    println!("criterion 08 (stack-construction contract over all pairs, n <= 9): PASS");
}

#[test]
fn a09_theta_prime_is_bijective() {
    // theta1 reads ascent data and theta2 builds ascent-top data, so it is
    // the matched readers that undo each construction: recovering the pair
    // through the ascent-top reader, and through the ascent reader after
    // mapping back, certifies the uniqueness claims behind both.
    for n in 1..=10usize {
        let set = members("avp:231", n);
        let mut images = BTreeSet::new();
        for pi in &set {
            images.insert(bijections::theta_prime(pi).unwrap());
        }
        assert_eq!(images.len(), set.len(), "not injective at n={n}");
        for pair in ConsistentPair::enumerate_all(n) {
            let by_atop = bijections::theta2(&pair);
            assert_eq!(bijections::theta2_inv(&by_atop).unwrap(), pair);
            let by_asc = bijections::theta_prime_inv(&by_atop).unwrap();
            assert_eq!(bijections::theta1(&by_asc).unwrap(), pair);
        }
    }
    println!("criterion 09 (theta_prime bijectivity and pair round trips, n <= 10): PASS");
}

#[test]
fn a10_discovery_smoke_test_through_the_cli() {
    let out = Command::new(env!("CARGO_BIN_EXE_permstat"))
        .args([
            "discover",
            "invariants",
            "--bijection",
            "big_theta",
            "--set",
            "av:3-1-2",
            "--n",
            "1..7",
            "--format",
            "json",
        ])
        .env_remove("PERMSTAT_MAX_MEMBERS")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let payload: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = payload["result"].as_array().unwrap();
    let preserved: BTreeSet<&str> = reports
        .iter()
        .filter(|r| r["compatible"] == serde_json::json!(true))
        .map(|r| r["candidate"].as_str().unwrap())
        .collect();
    for expected in ["head", "last", "lmax", "lmin"] {
        assert!(preserved.contains(expected), "{expected} not preserved");
    }

    // At least one refuted candidate, and its witness replays in isolation.
    let refuted: Vec<&serde_json::Value> = reports
        .iter()
        .filter(|r| r["compatible"] == serde_json::json!(false))
        .collect();
    assert!(!refuted.is_empty(), "expected a refuted candidate");
    let report = refuted[0];
    let name = report["candidate"].as_str().unwrap();
    let refutation = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["kind"] == serde_json::json!("refuted_preservation"))
        .expect("a refuted candidate carries a witness");
    let witness: Permutation = refutation["witness"].as_str().unwrap().parse().unwrap();
    let before = refutation["before"].as_u64().unwrap();
    let after = refutation["after"].as_u64().unwrap();
    let image = bijections::big_theta(&witness).unwrap();
    assert_eq!(stat(name, &witness), before);
    assert_eq!(stat(name, &image), after);
    assert_ne!(before, after, "witness must re-fail on replay");
    println!("criterion 10 (discovery smoke test via CLI): PASS");
}

#[test]
fn a11_pattern_counts_are_equivariant_under_reverse_and_complement() {
    let mut patterns = Vec::new();
    for m in 1..=3usize {
        for word in members("all", m) {
            for mask in 0u32..(1 << (m - 1)) {
                let slots: Vec<usize> = (1..m).filter(|bit| mask & (1 << (bit - 1)) != 0).collect();
                patterns.push(VincularPattern::new(word.clone(), &slots).unwrap());
            }
        }
    }
    assert_eq!(patterns.len(), 29);
    for n in 1..=7usize {
        for pi in members("all", n) {
            for pat in &patterns {
                let base = count_occurrences(&pi, pat);
                assert_eq!(
                    count_occurrences(&pi.reverse(), &pat.reverse()),
                    base,
                    "reverse on {pi} / {pat}"
                );
                assert_eq!(
                    count_occurrences(&pi.complement(), &pat.complement()),
                    base,
                    "complement on {pi} / {pat}"
                );
            }
        }
    }
    println!("criterion 11 (pattern-count equivariance, n <= 7): PASS");
}
