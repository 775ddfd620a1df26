//! The third-statistic discovery harness: searches a pool of candidate
//! statistics for ones that distribute evenly across matching partition
//! blocks of two labelled sets, and for ones a bijection preserves pointwise.
//!
//! Reports are deterministic: the pool is processed in lexicographic order,
//! refutations carry the smallest witness (the smallest label, or the
//! lexicographically smallest permutation), and every refutation replays in
//! isolation.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::bijections::{BijectionError, BijectionExpr};
use crate::perm::Permutation;
use crate::qpoly::QPolynomial;
use crate::sets::{Guard, SetError, SetFamily};
use crate::stats::{self, StatError, StatKind, StatRef};

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Stat(#[from] StatError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error("bijection domain does not cover the set: {witness} is outside ({source})")]
    DomainMismatch {
        witness: Permutation,
        source: BijectionError,
    },
}

/// Per-length verdict for one candidate statistic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Compatible,
    /// The candidate's distributions disagree on the blocks labelled `label`.
    RefutedPartition {
        label: u64,
        left: QPolynomial,
        right: QPolynomial,
    },
    /// The bijection moves the candidate's value on `witness`.
    RefutedPreservation {
        witness: Permutation,
        before: u64,
        after: u64,
    },
}

impl Verdict {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Verdict::Compatible)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NVerdict {
    pub n: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Outcome of one candidate across the whole length range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscoveryReport {
    pub candidate: String,
    /// Compatible (or preserved) at every length in the range.
    pub compatible: bool,
    pub verdicts: Vec<NVerdict>,
}

impl DiscoveryReport {
    /// First refutation, if any: the smallest length where the candidate
    /// fails, carrying its smallest witness.
    pub fn first_refutation(&self) -> Option<&NVerdict> {
        self.verdicts.iter().find(|v| !v.verdict.is_compatible())
    }
}

fn resolve_pool(pool: &[&str]) -> Result<Vec<(String, StatRef)>, StatError> {
    let mut resolved = Vec::with_capacity(pool.len());
    for name in pool {
        let stat = stats::lookup(name)?;
        if stat.kind() != StatKind::Integer {
            return Err(StatError::SetKind(stat.name()));
        }
        resolved.push((stat.name(), stat));
    }
    resolved.sort_by(|a, b| a.0.cmp(&b.0));
    resolved.dedup_by(|a, b| a.0 == b.0);
    Ok(resolved)
}

/// Sorts reports: candidates that stay compatible over the whole range first,
/// then the refuted ones, each group alphabetically.
fn finish_reports(mut reports: Vec<DiscoveryReport>) -> Vec<DiscoveryReport> {
    reports.sort_by(|a, b| {
        b.compatible
            .cmp(&a.compatible)
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
    reports
}

/// For each pool candidate and each length in the range: partitions both
/// sets by their primary statistic's value and checks that the candidate
/// distributes identically on every pair of blocks sharing a label.
pub fn refine_partitions(
    left: (&SetFamily, &str),
    right: (&SetFamily, &str),
    pool: &[&str],
    n_range: RangeInclusive<usize>,
    guard: &Guard,
) -> Result<Vec<DiscoveryReport>, DiscoveryError> {
    let left_stat = integer_stat(left.1)?;
    let right_stat = integer_stat(right.1)?;
    let pool = resolve_pool(pool)?;

    let mut verdicts: Vec<Vec<NVerdict>> = vec![Vec::new(); pool.len()];
    for n in n_range {
        let left_blocks = labelled_distributions(left.0, &left_stat, &pool, n, guard)?;
        let right_blocks = labelled_distributions(right.0, &right_stat, &pool, n, guard)?;
        for (idx, per_candidate) in verdicts.iter_mut().enumerate() {
            let mut verdict = Verdict::Compatible;
            for (label, left_dists) in &left_blocks {
                let Some(right_dists) = right_blocks.get(label) else {
                    continue;
                };
                if left_dists[idx] != right_dists[idx] {
                    verdict = Verdict::RefutedPartition {
                        label: *label,
                        left: left_dists[idx].clone(),
                        right: right_dists[idx].clone(),
                    };
                    break;
                }
            }
            per_candidate.push(NVerdict { n, verdict });
        }
    }

    Ok(finish_reports(assemble(pool, verdicts)))
}

/// For each pool candidate and each length: checks `st(pi) = st(f(pi))` on
/// every member. Refutations carry the lexicographically smallest violator.
pub fn bijection_invariants(
    bijection: &BijectionExpr,
    family: &SetFamily,
    pool: &[&str],
    n_range: RangeInclusive<usize>,
    guard: &Guard,
) -> Result<Vec<DiscoveryReport>, DiscoveryError> {
    let pool = resolve_pool(pool)?;
    // Membership is implied when the generator's family equals the
    // expression's domain, letting the bulk path skip per-member checks.
    let trusted = bijection
        .known_domain()
        .is_some_and(|domain| domain == family.to_string() || domain == "all");

    let mut verdicts: Vec<Vec<NVerdict>> = vec![Vec::new(); pool.len()];
    for n in n_range {
        let spec = family.spec(n)?;
        let mut per_n: Vec<Verdict> = vec![Verdict::Compatible; pool.len()];
        for pi in spec.stream_with_guard(guard)? {
            let image = if trusted {
                bijection.apply_perm_trusted(&pi)
            } else {
                bijection.apply_perm(&pi)
            };
            let image = match image {
                Ok(image) => image,
                Err(
                    source @ (BijectionError::PatternOccurrence { .. }
                    | BijectionError::FirstEntryNotMax { .. }),
                ) => {
                    return Err(DiscoveryError::DomainMismatch {
                        witness: pi,
                        source,
                    })
                }
                Err(other) => return Err(other.into()),
            };
            for (idx, (_, stat)) in pool.iter().enumerate() {
                if per_n[idx].is_compatible() {
                    let before = stat.eval_count(&pi);
                    let after = stat.eval_count(&image);
                    if before != after {
                        per_n[idx] = Verdict::RefutedPreservation {
                            witness: pi.clone(),
                            before,
                            after,
                        };
                    }
                }
            }
        }
        for (idx, verdict) in per_n.into_iter().enumerate() {
            verdicts[idx].push(NVerdict { n, verdict });
        }
    }

    Ok(finish_reports(assemble(pool, verdicts)))
}

fn integer_stat(name: &str) -> Result<StatRef, StatError> {
    let stat = stats::lookup(name)?;
    if stat.kind() != StatKind::Integer {
        return Err(StatError::SetKind(stat.name()));
    }
    Ok(stat)
}

/// One streaming pass: label -> per-candidate distribution over the block.
fn labelled_distributions(
    family: &SetFamily,
    primary: &StatRef,
    pool: &[(String, StatRef)],
    n: usize,
    guard: &Guard,
) -> Result<BTreeMap<u64, Vec<QPolynomial>>, DiscoveryError> {
    let spec = family.spec(n)?;
    let mut blocks: BTreeMap<u64, Vec<QPolynomial>> = BTreeMap::new();
    for pi in spec.stream_with_guard(guard)? {
        let label = primary.eval_count(&pi);
        let dists = blocks
            .entry(label)
            .or_insert_with(|| vec![QPolynomial::zero(); pool.len()]);
        for (idx, (_, stat)) in pool.iter().enumerate() {
            dists[idx].bump(stat.eval_count(&pi));
        }
    }
    Ok(blocks)
}

fn assemble(
    pool: Vec<(String, StatRef)>,
    verdicts: Vec<Vec<NVerdict>>,
) -> Vec<DiscoveryReport> {
    pool.into_iter()
        .zip(verdicts)
        .map(|((candidate, _), verdicts)| DiscoveryReport {
            candidate,
            compatible: verdicts.iter().all(|v| v.verdict.is_compatible()),
            verdicts,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(text: &str) -> SetFamily {
        SetFamily::parse(text).unwrap()
    }

    fn expr(text: &str) -> BijectionExpr {
        BijectionExpr::parse(text).unwrap()
    }

    fn compatible_names(reports: &[DiscoveryReport]) -> Vec<&str> {
        reports
            .iter()
            .filter(|r| r.compatible)
            .map(|r| r.candidate.as_str())
            .collect()
    }

    #[test]
    fn identical_sides_make_every_candidate_compatible() {
        let av231 = family("av:2-3-1");
        let reports = refine_partitions(
            (&av231, "maj"),
            (&av231, "maj"),
            &stats::default_pool(),
            1..=5,
            &Guard::DEFAULT,
        )
        .unwrap();
        assert!(reports.iter().all(|r| r.compatible));
        // Self-consistency also holds with the primary statistic as pool.
        let reports =
            refine_partitions((&av231, "maj"), (&av231, "maj"), &["maj"], 1..=5, &Guard::DEFAULT)
                .unwrap();
        assert!(reports.iter().all(|r| r.compatible));
    }

    #[test]
    fn identity_composition_preserves_everything() {
        let reports = bijection_invariants(
            &expr("reverse∘reverse"),
            &family("av:2-3-1"),
            &stats::default_pool(),
            1..=5,
            &Guard::DEFAULT,
        )
        .unwrap();
        assert!(reports.iter().all(|r| r.compatible));
    }

    #[test]
    fn psi_preserves_lmax_but_not_des() {
        let reports = bijection_invariants(
            &expr("psi"),
            &family("av:3-1-2"),
            &stats::default_pool(),
            1..=6,
            &Guard::DEFAULT,
        )
        .unwrap();
        let compatible = compatible_names(&reports);
        assert!(compatible.contains(&"lmax"));
        let des = reports.iter().find(|r| r.candidate == "des").unwrap();
        assert!(!des.compatible);
        let refutation = des.first_refutation().unwrap();
        // Smallest length first, smallest witness at that length.
        let Verdict::RefutedPreservation { witness, before, after } = &refutation.verdict else {
            panic!("expected a preservation refutation");
        };
        assert_eq!(refutation.n, 3);
        assert_eq!(witness.to_string(), "321");
        assert_eq!((*before, *after), (2, 1));
    }

    #[test]
    fn refuted_witnesses_replay() {
        let reports = bijection_invariants(
            &expr("psi"),
            &family("av:3-1-2"),
            &stats::default_pool(),
            1..=6,
            &Guard::DEFAULT,
        )
        .unwrap();
        for report in reports.iter().filter(|r| !r.compatible) {
            let stat = stats::lookup(&report.candidate).unwrap();
            for nv in &report.verdicts {
                if let Verdict::RefutedPreservation { witness, before, after } = &nv.verdict {
                    let image = expr("psi").apply_perm(witness).unwrap();
                    assert_eq!(stat.eval_count(witness), *before);
                    assert_eq!(stat.eval_count(&image), *after);
                    assert_ne!(before, after);
                }
            }
        }
    }

    #[test]
    fn refine_refutations_replay_in_isolation() {
        let av132 = family("av:1-3-2");
        let reports = refine_partitions(
            (&av132, "makl"),
            (&av132, "bast"),
            &stats::default_pool(),
            1..=5,
            &Guard::DEFAULT,
        )
        .unwrap();
        let refuted: Vec<_> = reports.iter().filter(|r| !r.compatible).collect();
        assert!(!refuted.is_empty(), "expected refuted candidates");
        let makl = stats::lookup("makl").unwrap();
        let bast = stats::lookup("bast").unwrap();
        for report in refuted {
            let candidate = stats::lookup(&report.candidate).unwrap();
            let nv = report.first_refutation().unwrap();
            let Verdict::RefutedPartition { label, left, right } = &nv.verdict else {
                panic!("refine refutations carry partition witnesses");
            };
            assert_ne!(left, right);
            // Recompute both block distributions from scratch.
            let replay = |primary: &stats::StatRef, stat: &stats::StatRef| {
                let mut dist = crate::qpoly::QPolynomial::zero();
                for pi in av132.spec(nv.n).unwrap().stream().unwrap() {
                    if primary.eval_count(&pi) == *label {
                        dist.bump(stat.eval_count(&pi));
                    }
                }
                dist
            };
            assert_eq!(&replay(&makl, &candidate), left, "{}", report.candidate);
            assert_eq!(&replay(&bast, &candidate), right, "{}", report.candidate);
        }
    }

    #[test]
    fn domain_mismatch_carries_a_witness() {
        let err = bijection_invariants(
            &expr("psi"),
            &family("all"),
            &stats::default_pool(),
            3..=3,
            &Guard::DEFAULT,
        )
        .unwrap_err();
        match err {
            DiscoveryError::DomainMismatch { witness, .. } => {
                // 312 is the lexicographically first non-member of Av(312).
                assert_eq!(witness.to_string(), "312");
            }
            other => panic!("expected a domain mismatch, got {other}"),
        }
    }

    #[test]
    fn reports_are_ordered_compatible_first_then_by_name() {
        let reports = bijection_invariants(
            &expr("psi"),
            &family("av:3-1-2"),
            &stats::default_pool(),
            1..=5,
            &Guard::DEFAULT,
        )
        .unwrap();
        let split = reports.iter().position(|r| !r.compatible).unwrap();
        assert!(reports[..split].iter().all(|r| r.compatible));
        assert!(reports[split..].iter().all(|r| !r.compatible));
        for group in [&reports[..split], &reports[split..]] {
            let names: Vec<_> = group.iter().map(|r| r.candidate.as_str()).collect();
            let mut sorted = names.clone();
            sorted.sort_unstable();
            assert_eq!(names, sorted);
        }
    }
}
