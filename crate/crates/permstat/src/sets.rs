//! Enumeration and membership for the full symmetric group, pattern-avoiding
//! families, and the subfamily of 231-avoiders beginning with their maximum.
//!
//! Generation is prefix-pruned backtracking: a prefix that already realizes a
//! forbidden pattern is abandoned, so avoidance classes are produced in time
//! proportional to the pruned tree rather than to `n!`. Members stream out in
//! lexicographic order and two passes over the same spec yield identical
//! sequences.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::pattern::{self, VincularPattern};
use crate::perm::Permutation;

/// A family of permutation sets, one set per length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SetFamily {
    /// The full symmetric group.
    All,
    /// Permutations avoiding every listed classical pattern.
    Avoiders(Vec<Permutation>),
    /// 231-avoiding permutations beginning with the largest element.
    AvPrime231,
}

/// A concrete permutation set: a family at a fixed length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetSpec {
    family: SetFamily,
    n: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("cannot parse set spec {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("avoider patterns must be classical; {pattern} carries adjacency constraints")]
    NotClassical { pattern: String },
    #[error("permutation length {got} does not match the set length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(
        "predicted cardinality {predicted} exceeds the enumeration guard {limit}; \
         raise the guard to proceed"
    )]
    GuardExceeded { predicted: u64, limit: u64 },
    #[error("set length must be at least 1")]
    ZeroLength,
}

/// Guard on predicted member counts, so behaviour is machine-independent.
/// `None` applies the per-family defaults: the full symmetric group up to
/// 10! members, avoidance families up to Catalan(12) members.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Guard {
    pub max_members: Option<u64>,
}

impl Guard {
    pub const DEFAULT: Guard = Guard { max_members: None };

    pub fn with_max(max_members: u64) -> Self {
        Guard {
            max_members: Some(max_members),
        }
    }
}

const DEFAULT_ALL_LIMIT: u64 = 3_628_800; // 10!
const DEFAULT_AVOIDER_LIMIT: u64 = 208_012; // Catalan(12)

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |acc, k| acc.saturating_mul(k))
}

/// The n-th Catalan number (saturating at `u64::MAX` far beyond desk scale).
pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        // C(k+1) = C(k) * 2(2k+1) / (k+2), always divisible.
        c = c.saturating_mul(2 * (2 * k + 1)) / (k + 2);
    }
    c
}

impl SetFamily {
    /// Parses the wire syntax `all | av:<p1>[,<p2>..] | avp:231`, with
    /// patterns in dash notation.
    pub fn parse(text: &str) -> Result<Self, SetError> {
        let err = |reason: &str| SetError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text == "all" {
            return Ok(SetFamily::All);
        }
        if text == "avp:231" {
            return Ok(SetFamily::AvPrime231);
        }
        if let Some(list) = text.strip_prefix("av:") {
            if list.is_empty() {
                return Err(err("expected at least one pattern after av:"));
            }
            let mut patterns = Vec::new();
            for part in list.split(',') {
                let vp: VincularPattern = part
                    .parse()
                    .map_err(|e| err(&format!("bad pattern {part:?}: {e}")))?;
                if !vp.is_classical() {
                    return Err(SetError::NotClassical {
                        pattern: vp.to_string(),
                    });
                }
                patterns.push(vp.word().clone());
            }
            return Ok(SetFamily::Avoiders(patterns));
        }
        Err(err("expected all, av:<patterns>, or avp:231"))
    }

    pub fn spec(&self, n: usize) -> Result<SetSpec, SetError> {
        SetSpec::new(self.clone(), n)
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetFamily::All => write!(f, "all"),
            SetFamily::Avoiders(patterns) => {
                write!(f, "av:")?;
                for (i, p) in patterns.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", VincularPattern::classical(p.clone()))?;
                }
                Ok(())
            }
            SetFamily::AvPrime231 => write!(f, "avp:231"),
        }
    }
}

impl FromStr for SetFamily {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SetFamily::parse(s)
    }
}

impl SetSpec {
    pub fn new(family: SetFamily, n: usize) -> Result<Self, SetError> {
        if n == 0 {
            return Err(SetError::ZeroLength);
        }
        Ok(Self { family, n })
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_n(&self, n: usize) -> Result<Self, SetError> {
        Self::new(self.family.clone(), n)
    }

    /// Membership test. Errors on length mismatch.
    pub fn contains(&self, pi: &Permutation) -> Result<bool, SetError> {
        if pi.len() != self.n {
            return Err(SetError::LengthMismatch {
                expected: self.n,
                got: pi.len(),
            });
        }
        Ok(match &self.family {
            SetFamily::All => true,
            SetFamily::Avoiders(patterns) => patterns.iter().all(|p| {
                !pattern::contains_pattern(pi, &VincularPattern::classical(p.clone()))
            }),
            SetFamily::AvPrime231 => {
                pi.value_at(1) as usize == self.n
                    && !pattern::contains_pattern(
                        pi,
                        &VincularPattern::classical("231".parse::<Permutation>().unwrap()),
                    )
            }
        })
    }

    /// Upper-bound prediction of the member count, used by the guard.
    /// Exact for the full group and for single length-<=3 patterns.
    pub fn predicted_members(&self) -> u64 {
        let n = self.n;
        match &self.family {
            SetFamily::All => factorial(n),
            SetFamily::AvPrime231 => catalan(n - 1),
            SetFamily::Avoiders(patterns) => patterns
                .iter()
                .map(|p| match p.len() {
                    1 => 0,
                    2 => 1,
                    3 => catalan(n),
                    _ => factorial(n),
                })
                .min()
                .unwrap_or_else(|| factorial(n)),
        }
    }

    pub fn check_guard(&self, guard: &Guard) -> Result<(), SetError> {
        let predicted = self.predicted_members();
        let limit = match guard.max_members {
            Some(limit) => limit,
            None => match self.family {
                SetFamily::All => DEFAULT_ALL_LIMIT,
                _ => DEFAULT_AVOIDER_LIMIT,
            },
        };
        if predicted > limit {
            return Err(SetError::GuardExceeded { predicted, limit });
        }
        Ok(())
    }

    /// Restartable lexicographic stream over the members, after checking the
    /// default guard.
    pub fn stream(&self) -> Result<MemberStream<'_>, SetError> {
        self.stream_with_guard(&Guard::DEFAULT)
    }

    pub fn stream_with_guard(&self, guard: &Guard) -> Result<MemberStream<'_>, SetError> {
        self.check_guard(guard)?;
        Ok(MemberStream::new(self, Vec::new()))
    }

    /// Exact member count via pruned generation (guard applies).
    pub fn count_members(&self, guard: &Guard) -> Result<u64, SetError> {
        let mut count = 0u64;
        for _ in self.stream_with_guard(guard)? {
            count += 1;
        }
        Ok(count)
    }

    /// Whether placing `value` at the next free slot keeps the prefix
    /// extendable to a member.
    fn admits(&self, prefix: &[u32], value: u32) -> bool {
        match &self.family {
            SetFamily::All => true,
            SetFamily::Avoiders(patterns) => {
                let mut extended = prefix.to_vec();
                extended.push(value);
                patterns
                    .iter()
                    .all(|p| !pattern::classical_occurrence_ending_at_last(&extended, p.word()))
            }
            SetFamily::AvPrime231 => {
                if prefix.is_empty() {
                    return value as usize == self.n;
                }
                let mut extended = prefix.to_vec();
                extended.push(value);
                !pattern::classical_occurrence_ending_at_last(&extended, &[2, 3, 1])
            }
        }
    }

    /// All admissible prefixes of the given depth, in lexicographic order.
    /// Completing each prefix visits every member exactly once, which is the
    /// fan-out point of the parallel distribution engine.
    pub(crate) fn partition_prefixes(&self, depth: usize) -> Vec<Vec<u32>> {
        let depth = depth.min(self.n);
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(depth);
        self.collect_prefixes(depth, &mut prefix, &mut out);
        out
    }

    fn collect_prefixes(&self, depth: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == depth {
            out.push(prefix.clone());
            return;
        }
        for value in 1..=self.n as u32 {
            if !prefix.contains(&value) && self.admits(prefix, value) {
                prefix.push(value);
                self.collect_prefixes(depth, prefix, out);
                prefix.pop();
            }
        }
    }

    /// Visits every member extending `seed` in lexicographic order.
    pub(crate) fn visit_completions<F: FnMut(&Permutation)>(&self, seed: &[u32], visit: &mut F) {
        for member in MemberStream::new(self, seed.to_vec()) {
            visit(&member);
        }
    }
}

/// Iterator over the members of a [`SetSpec`] in lexicographic order.
/// Backtracking state is explicit, so streams are cheap to restart: build a
/// fresh one from the spec.
pub struct MemberStream<'a> {
    spec: &'a SetSpec,
    prefix: Vec<u32>,
    used: Vec<bool>,
    /// Next candidate value to try at each depth.
    cursor: Vec<u32>,
    floor: usize,
    done: bool,
}

impl<'a> MemberStream<'a> {
    fn new(spec: &'a SetSpec, seed: Vec<u32>) -> Self {
        let n = spec.n;
        let mut used = vec![false; n + 1];
        for &v in &seed {
            used[v as usize] = true;
        }
        let mut cursor = vec![1u32; n + 1];
        for d in 0..seed.len() {
            cursor[d] = seed[d] + 1;
        }
        Self {
            spec,
            floor: seed.len(),
            prefix: seed,
            used,
            cursor,
            done: false,
        }
    }

    fn push(&mut self, value: u32) {
        self.used[value as usize] = true;
        self.prefix.push(value);
        self.cursor[self.prefix.len()] = 1;
    }

    fn pop(&mut self) {
        let value = self.prefix.pop().expect("pop on empty prefix");
        self.used[value as usize] = false;
    }
}

impl Iterator for MemberStream<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let n = self.spec.n;
        if self.prefix.len() == n {
            if self.floor == n {
                // Seed already fills the word: a single member.
                self.done = true;
                return Some(Permutation::from_word_unchecked(self.prefix.clone()));
            }
            self.pop();
        }
        loop {
            let depth = self.prefix.len();
            let mut advanced = false;
            let mut value = self.cursor[depth];
            while value as usize <= n {
                if !self.used[value as usize] && self.spec.admits(&self.prefix, value) {
                    self.cursor[depth] = value + 1;
                    self.push(value);
                    advanced = true;
                    break;
                }
                value += 1;
            }
            if !advanced {
                if depth == self.floor {
                    self.done = true;
                    return None;
                }
                self.pop();
                continue;
            }
            if self.prefix.len() == n {
                return Some(Permutation::from_word_unchecked(self.prefix.clone()));
            }
        }
    }
}
