//! Vincular and classical patterns: parsing, occurrence enumeration, and the
//! reverse/complement transforms.
//!
//! The plain-text grammar replaces the underline markup commonly used for
//! vincular patterns: letters inside one dash-free block are mutually
//! adjacency-constrained, a dash permits a gap. So `2-31` constrains the last
//! two slots of the occurrence to be adjacent, `3-2-1` is the classical
//! pattern 321, and `21` (a single block) matches descents only.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{PermError, Permutation, TrivialBijection};

/// A pattern word together with adjacency constraints between consecutive
/// slots. An empty constraint set encodes a classical pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VincularPattern {
    word: Permutation,
    /// `adjacent[j]` constrains slots `j+1` and `j+2` (1-based) to occupy
    /// consecutive host positions.
    adjacent: Vec<bool>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern text is empty")]
    Empty,
    #[error("pattern {text:?} contains an empty block")]
    EmptyBlock { text: String },
    #[error("unexpected character {ch:?} in pattern {text:?}")]
    InvalidChar { text: String, ch: char },
    #[error("pattern word is not reduced: {0}")]
    NotReduced(PermError),
    #[error("adjacency slot {slot} is out of range 1..{max}")]
    SlotOutOfRange { slot: usize, max: usize },
    #[error("the inverse of a vincular pattern is bivincular and unsupported")]
    UnsupportedTransform,
}

impl VincularPattern {
    /// A classical pattern: no adjacency constraints.
    pub fn classical(word: Permutation) -> Self {
        let m = word.len();
        Self {
            word,
            adjacent: vec![false; m.saturating_sub(1)],
        }
    }

    /// Builds a pattern from a word and 1-based adjacency slot indices
    /// (`j` constrains slots `j` and `j+1`).
    pub fn new(word: Permutation, adjacency_slots: &[usize]) -> Result<Self, PatternError> {
        let m = word.len();
        let mut adjacent = vec![false; m.saturating_sub(1)];
        for &slot in adjacency_slots {
            if slot == 0 || slot >= m {
                return Err(PatternError::SlotOutOfRange { slot, max: m - 1 });
            }
            adjacent[slot - 1] = true;
        }
        Ok(Self { word, adjacent })
    }

    pub fn parse(text: &str) -> Result<Self, PatternError> {
        text.parse()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn word(&self) -> &Permutation {
        &self.word
    }

    /// Sorted 1-based slot indices carrying an adjacency constraint.
    pub fn adjacency_slots(&self) -> Vec<usize> {
        self.adjacent
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn is_classical(&self) -> bool {
        self.adjacent.iter().all(|&a| !a)
    }

    /// Reverse flips the word and mirrors the adjacency constraints.
    pub fn reverse(&self) -> Self {
        let mut adjacent = self.adjacent.clone();
        adjacent.reverse();
        Self {
            word: self.word.reverse(),
            adjacent,
        }
    }

    /// Complement maps the word through `x -> m - x + 1`; adjacency
    /// constraints stay in place.
    pub fn complement(&self) -> Self {
        Self {
            word: self.word.complement(),
            adjacent: self.adjacent.clone(),
        }
    }

    /// Applies a trivial bijection to the pattern. Inversion is rejected:
    /// inverting a vincular pattern yields a bivincular one.
    pub fn transform(&self, bijection: TrivialBijection) -> Result<Self, PatternError> {
        match bijection {
            TrivialBijection::Reverse => Ok(self.reverse()),
            TrivialBijection::Complement => Ok(self.complement()),
            TrivialBijection::Invert => Err(PatternError::UnsupportedTransform),
        }
    }
}

impl fmt::Display for VincularPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, &v) in self.word.word().iter().enumerate() {
            if idx > 0 && !self.adjacent[idx - 1] {
                write!(f, "-")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VincularPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VincularPattern({self})")
    }
}

impl FromStr for VincularPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(PatternError::Empty);
        }
        let mut letters: Vec<i64> = Vec::new();
        let mut adjacent: Vec<bool> = Vec::new();
        let mut block_len = 0usize;
        for ch in s.chars() {
            match ch {
                '-' => {
                    if block_len == 0 {
                        return Err(PatternError::EmptyBlock {
                            text: s.to_string(),
                        });
                    }
                    adjacent.push(false);
                    block_len = 0;
                }
                '1'..='9' => {
                    if block_len > 0 {
                        adjacent.push(true);
                    }
                    letters.push(ch.to_digit(10).unwrap() as i64);
                    block_len += 1;
                }
                other => {
                    return Err(PatternError::InvalidChar {
                        text: s.to_string(),
                        ch: other,
                    })
                }
            }
        }
        if block_len == 0 {
            return Err(PatternError::EmptyBlock {
                text: s.to_string(),
            });
        }
        let word = Permutation::new(&letters).map_err(PatternError::NotReduced)?;
        Ok(Self { word, adjacent })
    }
}

impl serde::Serialize for VincularPattern {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Backtracking search over occurrence tuples. Visits occurrences in
/// lexicographic order; the callback can stop the search early.
fn search<F>(host: &Permutation, pattern: &VincularPattern, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = host.len();
    let m = pattern.len();
    if m > n {
        return ControlFlow::Continue(());
    }
    let word = host.word();
    let pat = pattern.word.word();
    let mut chosen: Vec<usize> = Vec::with_capacity(m); // 0-based host indices

    fn extend<F>(
        word: &[u32],
        pat: &[u32],
        adjacent: &[bool],
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let slot = chosen.len();
        let m = pat.len();
        if slot == m {
            let tuple: Vec<usize> = chosen.iter().map(|&i| i + 1).collect();
            return visit(&tuple);
        }
        let (lo, hi) = if slot == 0 {
            (0, word.len() - (m - 1))
        } else if adjacent[slot - 1] {
            let next = chosen[slot - 1] + 1;
            (next, (next + 1).min(word.len() - (m - 1 - slot)))
        } else {
            (chosen[slot - 1] + 1, word.len() - (m - 1 - slot))
        };
        for i in lo..hi {
            let consistent = chosen.iter().enumerate().all(|(s, &j)| {
                (pat[s] < pat[slot]) == (word[j] < word[i])
            });
            if consistent {
                chosen.push(i);
                extend(word, pat, adjacent, chosen, visit)?;
                chosen.pop();
            }
        }
        ControlFlow::Continue(())
    }

    extend(word, pat, &pattern.adjacent, &mut chosen, visit)
}

/// All occurrences of `pattern` in `host` as 1-based position tuples, in
/// lexicographic order.
pub fn occurrences(host: &Permutation, pattern: &VincularPattern) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let _ = search(host, pattern, &mut |tuple| {
        out.push(tuple.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Number of occurrences of `pattern` in `host`.
pub fn count_occurrences(host: &Permutation, pattern: &VincularPattern) -> u64 {
    let mut count = 0u64;
    let _ = search(host, pattern, &mut |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// The lexicographically first occurrence, if any.
pub fn first_occurrence(host: &Permutation, pattern: &VincularPattern) -> Option<Vec<usize>> {
    let mut found = None;
    let _ = search(host, pattern, &mut |tuple| {
        found = Some(tuple.to_vec());
        ControlFlow::Break(())
    });
    found
}

pub fn contains_pattern(host: &Permutation, pattern: &VincularPattern) -> bool {
    first_occurrence(host, pattern).is_some()
}

/// Total occurrence count over a multiset of patterns; repeated entries count
/// with multiplicity.
pub fn pattern_sum(host: &Permutation, terms: &[VincularPattern]) -> u64 {
    terms.iter().map(|t| count_occurrences(host, t)).sum()
}

/// Whether extending a duplicate-free prefix word by its final entry created
/// an occurrence of the classical pattern ending exactly at the last position.
/// This is the pruning test used by the restricted-permutation generator.
pub(crate) fn classical_occurrence_ending_at_last(prefix: &[u32], pat: &[u32]) -> bool {
    let m = pat.len();
    let k = prefix.len();
    if m > k {
        return false;
    }
    let last_val = prefix[k - 1];

    fn extend(prefix: &[u32], pat: &[u32], last_val: u32, chosen: &mut Vec<usize>) -> bool {
        let slot = chosen.len();
        let m = pat.len();
        if slot == m - 1 {
            return true;
        }
        let lo = chosen.last().map_or(0, |&j| j + 1);
        let hi = prefix.len() - 1 - (m - 2 - slot);
        for i in lo..hi {
            let ok_last = (pat[slot] < pat[m - 1]) == (prefix[i] < last_val);
            let ok_prev = chosen
                .iter()
                .enumerate()
                .all(|(s, &j)| (pat[s] < pat[slot]) == (prefix[j] < prefix[i]));
            if ok_last && ok_prev {
                chosen.push(i);
                if extend(prefix, pat, last_val, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    if m == 1 {
        return true;
    }
    extend(prefix, pat, last_val, &mut Vec::with_capacity(m - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn v(s: &str) -> VincularPattern {
        s.parse().unwrap()
    }

    #[test]
    fn parse_reads_the_dash_grammar() {
        let pat = v("2-31");
        assert_eq!(pat.word(), &p("231"));
        assert_eq!(pat.adjacency_slots(), vec![2]);

        let classical = v("3-2-1");
        assert_eq!(classical.word(), &p("321"));
        assert!(classical.is_classical());

        let pat = v("32-1");
        assert_eq!(pat.adjacency_slots(), vec![1]);

        let descent = v("21");
        assert_eq!(descent.adjacency_slots(), vec![1]);
    }

    #[test]
    fn parse_rejects_malformed_text() {
        assert!(matches!(
            VincularPattern::parse("2-x1"),
            Err(PatternError::InvalidChar { .. })
        ));
        assert!(matches!(
            VincularPattern::parse("2--1"),
            Err(PatternError::EmptyBlock { .. })
        ));
        assert!(matches!(
            VincularPattern::parse("2-1-"),
            Err(PatternError::EmptyBlock { .. })
        ));
        assert!(matches!(
            VincularPattern::parse("1-1"),
            Err(PatternError::NotReduced(_))
        ));
        assert!(matches!(
            VincularPattern::parse("2-4-1"),
            Err(PatternError::NotReduced(_))
        ));
        assert!(matches!(
            VincularPattern::parse(""),
            Err(PatternError::Empty)
        ));
    }

    #[test]
    fn display_round_trips() {
        for text in ["2-31", "3-2-1", "32-1", "21", "1", "1-32", "3-21"] {
            assert_eq!(v(text).to_string(), text);
        }
    }

    #[test]
    fn occurrences_on_the_running_example() {
        let host = p("4235167");
        assert_eq!(
            occurrences(&host, &v("3-2-1")),
            vec![vec![1, 2, 5], vec![1, 3, 5]]
        );
        assert_eq!(occurrences(&host, &v("32-1")), vec![vec![1, 2, 5]]);
        assert_eq!(
            occurrences(&p("123"), &v("1-2")),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn single_letter_pattern_counts_every_position() {
        assert_eq!(count_occurrences(&p("4235167"), &v("1")), 7);
    }

    #[test]
    fn longer_pattern_than_host_matches_nothing() {
        assert_eq!(count_occurrences(&p("21"), &v("3-2-1")), 0);
    }

    #[test]
    fn transforms_follow_the_pattern_rules() {
        assert_eq!(v("2-31").reverse().to_string(), "13-2");
        assert_eq!(v("2-31").complement().to_string(), "2-13");
        assert_eq!(v("32-1").reverse().reverse(), v("32-1"));
        assert!(matches!(
            v("2-31").transform(TrivialBijection::Invert),
            Err(PatternError::UnsupportedTransform)
        ));
    }

    #[test]
    fn pattern_sum_counts_with_multiplicity() {
        let maj_terms: Vec<VincularPattern> =
            ["1-32", "2-31", "3-21", "21"].iter().map(|s| v(s)).collect();
        let host = p("4235167");
        assert_eq!(pattern_sum(&host, &maj_terms), 5);
        // Cross-check against the descent-position route.
        let descent_sum: u64 = host.descent_positions().iter().map(|&i| i as u64).sum();
        assert_eq!(descent_sum, 5);

        let identity = Permutation::identity(6);
        assert_eq!(pattern_sum(&identity, &maj_terms), 0);

        let fozepp_terms: Vec<VincularPattern> =
            ["23-1", "31-2", "31-2", "21"].iter().map(|s| v(s)).collect();
        assert_eq!(pattern_sum(&p("312"), &fozepp_terms), 3);
    }

    #[test]
    fn returned_tuples_are_valid() {
        let host = p("4623175");
        for text in ["2-31", "32-1", "21", "1-2-3", "13-2"] {
            let pat = v(text);
            for tuple in occurrences(&host, &pat) {
                assert!(tuple.windows(2).all(|w| w[0] < w[1]));
                assert!(tuple.iter().all(|&i| 1 <= i && i <= host.len()));
                for (slot, pair) in tuple.windows(2).enumerate() {
                    if pat.adjacency_slots().contains(&(slot + 1)) {
                        assert_eq!(pair[1], pair[0] + 1);
                    }
                }
                let values: Vec<i64> =
                    tuple.iter().map(|&i| host.value_at(i) as i64).collect();
                assert_eq!(&Permutation::reduce(&values).unwrap(), pat.word());
            }
        }
    }

    #[test]
    fn extra_adjacency_never_increases_counts() {
        let host = p("4235167");
        assert!(count_occurrences(&host, &v("32-1")) <= count_occurrences(&host, &v("3-2-1")));
        assert!(count_occurrences(&host, &v("321")) <= count_occurrences(&host, &v("32-1")));
    }

    #[test]
    fn prefix_check_detects_new_occurrences_only_at_the_end() {
        let pat = p("231");
        assert!(classical_occurrence_ending_at_last(
            &[2, 3, 1],
            pat.word()
        ));
        assert!(!classical_occurrence_ending_at_last(
            &[2, 3, 4],
            pat.word()
        ));
        assert!(!classical_occurrence_ending_at_last(&[2, 3], pat.word()));
        // 2431: the 231-occurrence ends at the last position.
        assert!(classical_occurrence_ending_at_last(
            &[2, 4, 3, 1],
            pat.word()
        ));
    }
}
