//! The permutation value type: construction, reduction, trivial bijections,
//! direct sums, and inverse descent runs.
//!
//! A permutation is a word over `1..=n` in one-line notation. All positions in
//! the public API are 1-based, matching the usual combinatorics convention.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A permutation of `{1, .., n}` in one-line notation, `n >= 1`.
///
/// Entries are values, positions are 1-based. The word is validated on
/// construction and immutable afterwards, so every operation is a pure
/// function of its inputs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u32>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation word must be non-empty")]
    Empty,
    #[error("entry {value} at position {position} is not a positive integer")]
    NonPositive { position: usize, value: i64 },
    #[error("entry {value} at position {position} exceeds the length {n}")]
    TooLarge { position: usize, value: i64, n: usize },
    #[error("duplicate value {value} at position {position}")]
    Duplicate { position: usize, value: i64 },
    #[error("cannot parse permutation from {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

impl Permutation {
    /// Builds a permutation, rejecting anything that is not a rearrangement
    /// of `1..=n`. The error identifies the first offending entry.
    pub fn new(word: &[i64]) -> Result<Self, PermError> {
        if word.is_empty() {
            return Err(PermError::Empty);
        }
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for (idx, &v) in word.iter().enumerate() {
            let position = idx + 1;
            if v <= 0 {
                return Err(PermError::NonPositive { position, value: v });
            }
            if v as usize > n {
                return Err(PermError::TooLarge { position, value: v, n });
            }
            if seen[v as usize] {
                return Err(PermError::Duplicate { position, value: v });
            }
            seen[v as usize] = true;
        }
        Ok(Self {
            word: word.iter().map(|&v| v as u32).collect(),
        })
    }

    /// Replaces the i-th smallest entry of a duplicate-free word by `i`.
    pub fn reduce(entries: &[i64]) -> Result<Self, PermError> {
        if entries.is_empty() {
            return Err(PermError::Empty);
        }
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.sort_by_key(|&i| entries[i]);
        for pair in order.windows(2) {
            if entries[pair[0]] == entries[pair[1]] {
                let position = pair[0].max(pair[1]) + 1;
                return Err(PermError::Duplicate {
                    position,
                    value: entries[pair[1]],
                });
            }
        }
        let mut word = vec![0u32; entries.len()];
        for (rank, &i) in order.iter().enumerate() {
            word[i] = rank as u32 + 1;
        }
        Ok(Self { word })
    }

    /// The identity permutation `12..n`. Requires `n >= 1`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutations have length at least 1");
        Self {
            word: (1..=n as u32).collect(),
        }
    }

    /// Internal constructor for words already known to be valid.
    pub(crate) fn from_word_unchecked(word: Vec<u32>) -> Self {
        debug_assert!(!word.is_empty());
        debug_assert!({
            let mut sorted = word.clone();
            sorted.sort_unstable();
            sorted.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
        });
        Self { word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// Entry at a 1-based position.
    pub fn value_at(&self, position: usize) -> u32 {
        self.word[position - 1]
    }

    /// 1-based position of a value.
    pub fn position_of(&self, value: u32) -> usize {
        debug_assert!(value >= 1 && value as usize <= self.len());
        self.word.iter().position(|&v| v == value).unwrap() + 1
    }

    /// `r(pi) = pi_n .. pi_1`.
    pub fn reverse(&self) -> Self {
        let mut word = self.word.clone();
        word.reverse();
        Self { word }
    }

    /// `c(pi)` maps each entry `x` to `n - x + 1`, keeping positions.
    pub fn complement(&self) -> Self {
        let n = self.len() as u32;
        Self {
            word: self.word.iter().map(|&v| n - v + 1).collect(),
        }
    }

    /// Functional inverse: the `pi_i`-th entry of the result is `i`.
    pub fn invert(&self) -> Self {
        let mut word = vec![0u32; self.len()];
        for (idx, &v) in self.word.iter().enumerate() {
            word[v as usize - 1] = idx as u32 + 1;
        }
        Self { word }
    }

    pub fn apply_trivial(&self, bijection: TrivialBijection) -> Self {
        match bijection {
            TrivialBijection::Reverse => self.reverse(),
            TrivialBijection::Complement => self.complement(),
            TrivialBijection::Invert => self.invert(),
        }
    }

    /// Concatenates `self` with `other` shifted up by `|self|`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let shift = self.len() as u32;
        let mut word = self.word.clone();
        word.extend(other.word.iter().map(|&v| v + shift));
        Self { word }
    }

    /// Finest direct-sum decomposition: splits after every position `i`
    /// whose prefix is exactly `{1..i}`. Folding the blocks back with
    /// [`direct_sum`](Self::direct_sum) reproduces the permutation.
    pub fn decompose_direct_sum(&self) -> Vec<Self> {
        let mut blocks = Vec::new();
        let mut start = 0usize;
        let mut prefix_max = 0u32;
        for (idx, &v) in self.word.iter().enumerate() {
            prefix_max = prefix_max.max(v);
            // The prefix holds idx+1 distinct values <= prefix_max, so it is
            // exactly {1..idx+1} iff prefix_max == idx+1.
            if prefix_max as usize == idx + 1 {
                let shift = start as u32;
                let block = self.word[start..=idx].iter().map(|&v| v - shift).collect();
                blocks.push(Self { word: block });
                start = idx + 1;
            }
        }
        blocks
    }

    /// Inverse descent runs as 1-based position sets, each sorted
    /// increasingly, ordered by decreasing maximum value of the permutation
    /// over the set. Together they partition `{1..n}`; within a run the
    /// values read left to right are consecutive and decreasing.
    pub fn inverse_descent_runs(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let inv = self.invert();
        let pos = |v: u32| inv.word[v as usize - 1] as usize;
        let mut runs: Vec<Vec<usize>> = Vec::new();
        let mut current = vec![pos(n as u32)];
        for v in (1..n as u32).rev() {
            // Value v chains onto v+1 when it sits further right.
            if pos(v) > pos(v + 1) {
                current.push(pos(v));
            } else {
                runs.push(std::mem::replace(&mut current, vec![pos(v)]));
            }
        }
        runs.push(current);
        for run in &mut runs {
            run.sort_unstable();
        }
        runs
    }

    /// 1-based positions `i < n` with `pi_i < pi_{i+1}`.
    pub fn ascent_positions(&self) -> Vec<usize> {
        self.word
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] < w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// 1-based positions `i < n` with `pi_i > pi_{i+1}`.
    pub fn descent_positions(&self) -> Vec<usize> {
        self.word
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Positions whose value exceeds everything to their left.
    pub fn ltr_max_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut best = 0u32;
        for (idx, &v) in self.word.iter().enumerate() {
            if v > best {
                best = v;
                out.push(idx + 1);
            }
        }
        out
    }

    /// Positions whose value is below everything to their left.
    pub fn ltr_min_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut best = u32::MAX;
        for (idx, &v) in self.word.iter().enumerate() {
            if v < best {
                best = v;
                out.push(idx + 1);
            }
        }
        out
    }

    /// Positions whose value exceeds everything to their right.
    pub fn rtl_max_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut best = 0u32;
        for (idx, &v) in self.word.iter().enumerate().rev() {
            if v > best {
                best = v;
                out.push(idx + 1);
            }
        }
        out.reverse();
        out
    }

    /// Positions whose value is below everything to their right.
    pub fn rtl_min_positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut best = u32::MAX;
        for (idx, &v) in self.word.iter().enumerate().rev() {
            if v < best {
                best = v;
                out.push(idx + 1);
            }
        }
        out.reverse();
        out
    }
}

/// Renders as a digit string for `n <= 9` and as comma-separated integers
/// otherwise; both forms round-trip through [`FromStr`].
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |reason: &str| PermError::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(PermError::Empty);
        }
        let entries: Vec<i64> = if s.contains(',') {
            s.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<i64>()
                        .map_err(|_| parse_err("expected a comma-separated list of integers"))
                })
                .collect::<Result<_, _>>()?
        } else {
            // Digit-string shorthand, one entry per character; only words of
            // length <= 9 are expressible this way.
            s.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(i64::from)
                        .ok_or_else(|| parse_err("expected digits or a comma-separated list"))
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::new(&entries)
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The three trivial bijections on permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialBijection {
    Reverse,
    Complement,
    Invert,
}

impl fmt::Display for TrivialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TrivialBijection::Reverse => "reverse",
            TrivialBijection::Complement => "complement",
            TrivialBijection::Invert => "invert",
        };
        write!(f, "{name}")
    }
}

impl FromStr for TrivialBijection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reverse" => Ok(TrivialBijection::Reverse),
            "complement" => Ok(TrivialBijection::Complement),
            "invert" => Ok(TrivialBijection::Invert),
            other => Err(format!("unknown trivial bijection {other:?}")),
        }
    }
}

/// `inner` is nested in `outer` when all of `inner` fits strictly between two
/// consecutive elements of `outer`. Requires `outer` sorted increasing.
pub fn nested_in(inner: &[usize], outer: &[usize]) -> bool {
    let (Some(&min), Some(&max)) = (inner.first(), inner.last()) else {
        return outer.len() >= 2;
    };
    outer.windows(2).any(|gap| gap[0] < min && max < gap[1])
}

/// Sets are disjoint when their value ranges do not overlap.
pub fn disjoint(a: &[usize], b: &[usize]) -> bool {
    match (a.last(), b.first(), b.last(), a.first()) {
        (Some(&a_max), Some(&b_min), Some(&b_max), Some(&a_min)) => {
            a_max < b_min || b_max < a_min
        }
        _ => true,
    }
}
