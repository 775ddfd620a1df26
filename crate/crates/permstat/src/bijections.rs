//! The equidistribution bijections: the consistent-pair parameterization of
//! 231-avoiders that begin with their maximum, the stack construction mapping
//! ascent data to ascent-top data, its direct-sum extension `theta`, the
//! conjugated composition `big_theta`, and the Simion-Schmidt map `psi`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::pattern::{self, VincularPattern};
use crate::perm::Permutation;

/// The `(c, m)` sequence pair parameterizing 231-avoiders that begin with
/// their maximum: `c` lists the inverse-descent-run lengths, `m` the run
/// maxima thresholds.
///
/// Enforced invariants: equal non-zero lengths, positive run lengths,
/// `m_1 = c_1 + .. + c_k`, `m` strictly decreasing, and
/// `m_i > c_i + .. + c_k` for `i > 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ConsistentPair {
    c: Vec<u32>,
    m: Vec<u32>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("run-length and threshold sequences differ in length ({c_len} vs {m_len})")]
    LengthMismatch { c_len: usize, m_len: usize },
    #[error("sequences must be non-empty")]
    Empty,
    #[error("run length at index {index} must be positive")]
    NonPositiveRunLength { index: usize },
    #[error("first threshold {found} must equal the total run length {total}")]
    FirstThresholdNotTotal { found: u32, total: u32 },
    #[error("thresholds must be strictly decreasing; violation at index {index}")]
    NotStrictlyDecreasing { index: usize },
    #[error("threshold {found} at index {index} must exceed the trailing run-length sum {suffix}")]
    ThresholdTooSmall {
        index: usize,
        found: u32,
        suffix: u32,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error("input must lie in {domain}: {pattern} occurs at positions {witness:?}")]
    PatternOccurrence {
        domain: &'static str,
        pattern: &'static str,
        witness: Vec<usize>,
    },
    #[error("input must lie in {domain}: first entry {found} is not the maximum {expected}")]
    FirstEntryNotMax {
        domain: &'static str,
        found: u32,
        expected: u32,
    },
    #[error(transparent)]
    InvalidPair(#[from] PairError),
    #[error("unknown bijection name {0:?}")]
    UnknownName(String),
    #[error("stage {stage:?} of the bijection expression expects {expected}")]
    TypeMismatch {
        stage: &'static str,
        expected: &'static str,
    },
}

impl ConsistentPair {
    /// Validates the pair, reporting the first violated condition with its
    /// failing (1-based) index.
    pub fn new(c: Vec<u32>, m: Vec<u32>) -> Result<Self, PairError> {
        if c.len() != m.len() {
            return Err(PairError::LengthMismatch {
                c_len: c.len(),
                m_len: m.len(),
            });
        }
        if c.is_empty() {
            return Err(PairError::Empty);
        }
        for (idx, &ci) in c.iter().enumerate() {
            if ci == 0 {
                return Err(PairError::NonPositiveRunLength { index: idx + 1 });
            }
        }
        let total: u32 = c.iter().sum();
        if m[0] != total {
            return Err(PairError::FirstThresholdNotTotal {
                found: m[0],
                total,
            });
        }
        for i in 1..m.len() {
            if m[i] >= m[i - 1] {
                return Err(PairError::NotStrictlyDecreasing { index: i + 1 });
            }
        }
        let mut suffix: u32 = 0;
        for i in (1..c.len()).rev() {
            suffix += c[i];
            if m[i] <= suffix {
                return Err(PairError::ThresholdTooSmall {
                    index: i + 1,
                    found: m[i],
                    suffix,
                });
            }
        }
        Ok(Self { c, m })
    }

    pub fn run_lengths(&self) -> &[u32] {
        &self.c
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.c.iter().sum::<u32>() as usize
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    /// Every consistent pair with total run length `n`, in lexicographic
    /// order of `(c, m)`. There are as many as 231-avoiders of length `n`
    /// beginning with `n`.
    pub fn enumerate_all(n: usize) -> Vec<ConsistentPair> {
        fn compositions(n: u32, out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>) {
            if n == 0 {
                out.push(current.clone());
                return;
            }
            for part in 1..=n {
                current.push(part);
                compositions(n - part, out, current);
                current.pop();
            }
        }
        fn extend_m(
            c: &[u32],
            suffix: &[u32],
            m: &mut Vec<u32>,
            out: &mut Vec<ConsistentPair>,
        ) {
            let i = m.len();
            if i == c.len() {
                out.push(ConsistentPair {
                    c: c.to_vec(),
                    m: m.clone(),
                });
                return;
            }
            // m_i ranges strictly between the trailing run-length sum and
            // the previous threshold.
            for value in (suffix[i] + 1..m[i - 1]).rev() {
                m.push(value);
                extend_m(c, suffix, m, out);
                m.pop();
            }
        }

        let mut all_c = Vec::new();
        compositions(n as u32, &mut all_c, &mut Vec::new());
        let mut out = Vec::new();
        for c in all_c {
            let mut suffix = vec![0u32; c.len() + 1];
            for i in (0..c.len()).rev() {
                suffix[i] = suffix[i + 1] + c[i];
            }
            let mut m = vec![n as u32];
            extend_m(&c, &suffix, &mut m, &mut out);
        }
        out.sort_by(|a, b| (&a.c, &a.m).cmp(&(&b.c, &b.m)));
        out
    }
}

impl fmt::Display for ConsistentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u32]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "(({}),({}))", join(&self.c), join(&self.m))
    }
}

impl fmt::Debug for ConsistentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConsistentPair{self}")
    }
}

/// Parses the compact `c1,c2,..:m1,m2,..` form.
impl FromStr for ConsistentPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (c_text, m_text) = s
            .split_once(':')
            .ok_or_else(|| format!("expected c1,c2,..:m1,m2,.. in {s:?}"))?;
        let parse_list = |text: &str| -> Result<Vec<u32>, String> {
            text.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u32>()
                        .map_err(|_| format!("bad integer {part:?} in {s:?}"))
                })
                .collect()
        };
        ConsistentPair::new(parse_list(c_text)?, parse_list(m_text)?).map_err(|e| e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Domain checks
// ---------------------------------------------------------------------------

fn classical_231() -> &'static VincularPattern {
    static P: OnceLock<VincularPattern> = OnceLock::new();
    P.get_or_init(|| "2-3-1".parse().unwrap())
}

fn classical_312() -> &'static VincularPattern {
    static P: OnceLock<VincularPattern> = OnceLock::new();
    P.get_or_init(|| "3-1-2".parse().unwrap())
}

fn check_avoids(
    pi: &Permutation,
    pattern: &'static VincularPattern,
    pattern_name: &'static str,
    domain: &'static str,
) -> Result<(), BijectionError> {
    match pattern::first_occurrence(pi, pattern) {
        None => Ok(()),
        Some(witness) => Err(BijectionError::PatternOccurrence {
            domain,
            pattern: pattern_name,
            witness,
        }),
    }
}

fn check_av231(pi: &Permutation) -> Result<(), BijectionError> {
    check_avoids(pi, classical_231(), "2-3-1", "Av(231)")
}

fn check_av312(pi: &Permutation) -> Result<(), BijectionError> {
    check_avoids(pi, classical_312(), "3-1-2", "Av(312)")
}

fn check_av_prime_231(pi: &Permutation) -> Result<(), BijectionError> {
    let n = pi.len() as u32;
    if pi.value_at(1) != n {
        return Err(BijectionError::FirstEntryNotMax {
            domain: "Av'(231)",
            found: pi.value_at(1),
            expected: n,
        });
    }
    check_avoids(pi, classical_231(), "2-3-1", "Av'(231)")
}

// ---------------------------------------------------------------------------
// Pair readers and builders
// ---------------------------------------------------------------------------

/// Reads `(run lengths, {n} + ascent positions)` off a member of Av'(231).
fn read_pair_by_asc(pi: &Permutation) -> ConsistentPair {
    let c: Vec<u32> = pi
        .inverse_descent_runs()
        .iter()
        .map(|run| run.len() as u32)
        .collect();
    let mut m: Vec<u32> = vec![pi.len() as u32];
    let mut ascents: Vec<u32> = pi.ascent_positions().iter().map(|&i| i as u32).collect();
    ascents.sort_unstable_by(|a, b| b.cmp(a));
    m.extend(ascents);
    ConsistentPair::new(c, m).expect("ascent data of a 231-avoider starting with its maximum")
}

/// Reads `(run lengths, {n} + ascent-top values)` off a member of Av'(231).
fn read_pair_by_atop(pi: &Permutation) -> ConsistentPair {
    let c: Vec<u32> = pi
        .inverse_descent_runs()
        .iter()
        .map(|run| run.len() as u32)
        .collect();
    let mut m: Vec<u32> = vec![pi.len() as u32];
    let mut tops: Vec<u32> = pi
        .ascent_positions()
        .iter()
        .map(|&i| pi.value_at(i + 1))
        .collect();
    tops.sort_unstable_by(|a, b| b.cmp(a));
    m.extend(tops);
    ConsistentPair::new(c, m).expect("ascent-top data of a 231-avoider starting with its maximum")
}

/// The two-stack construction: builds the unique member of Av'(231) whose
/// run lengths are `c` and whose ascent-top values are `m_2, .., m_k`.
///
/// Values are pushed in descending blocks of sizes `c_i`; each round
/// transfers to the output until the top of the input stack is one of the
/// prescribed ascent tops, then transfers once more. The input stack stays
/// strictly increasing from top to bottom throughout, which is what makes
/// the output 231-avoiding.
fn build_by_atop(pair: &ConsistentPair) -> Permutation {
    let n = pair.n() as u32;
    let mut is_top = vec![false; n as usize + 1];
    for &mi in &pair.m[1..] {
        is_top[mi as usize] = true;
    }
    let mut input: Vec<u32> = Vec::with_capacity(n as usize);
    let mut output: Vec<u32> = Vec::with_capacity(n as usize);
    let mut next = n;
    for &ci in &pair.c {
        for _ in 0..ci {
            debug_assert!(
                input.last().is_none_or(|&top| next < top),
                "input stack must stay strictly increasing from the top"
            );
            input.push(next);
            next -= 1;
        }
        while input.last().is_some_and(|&top| !is_top[top as usize]) {
            output.push(input.pop().unwrap());
        }
        if let Some(top) = input.pop() {
            output.push(top);
        }
    }
    debug_assert!(input.is_empty(), "input stack must drain in the last round");
    output.reverse();
    Permutation::from_word_unchecked(output)
}

/// Builds the unique member of Av'(231) whose run lengths are `c` and whose
/// ascent positions are `m_2, .., m_k`.
///
/// The ascent positions cut `1..n` into maximal descending intervals. Working
/// from the last interval backwards, each interval pairs with the next run
/// (run 1 with the last interval) and collects the smallest values not yet
/// used among the runs available to it; sorting each interval descending then
/// yields the word.
fn build_by_asc(pair: &ConsistentPair) -> Permutation {
    let n = pair.n();
    let k = pair.k();
    // prefix[j] = c_1 + .. + c_j, so run j covers values n-prefix[j]+1 ..= n-prefix[j-1].
    let mut prefix = vec![0u32; k + 1];
    for j in 1..=k {
        prefix[j] = prefix[j - 1] + pair.c[j - 1];
    }
    // Interval boundaries from the ascent positions, ascending.
    let mut bounds: Vec<usize> = pair.m[1..].iter().map(|&a| a as usize).collect();
    bounds.sort_unstable();
    bounds.push(n);

    let mut used = vec![false; n + 1];
    let mut word = vec![0u32; n];
    let mut interval_ranges = Vec::with_capacity(k);
    let mut start = 0;
    for &end in &bounds {
        interval_ranges.push((start, end));
        start = end;
    }
    for t in (0..k).rev() {
        let (lo, hi) = interval_ranges[t];
        let len = hi - lo;
        // Interval t (0-based) pairs with run j = k - t (1-based); eligible
        // values are those of runs 1..=j, i.e. everything >= n - prefix[j] + 1.
        let j = k - t;
        let min_eligible = n - prefix[j] as usize + 1;
        let mut values = Vec::with_capacity(len);
        let mut v = min_eligible;
        while values.len() < len && v <= n {
            if !used[v] {
                used[v] = true;
                values.push(v as u32);
            }
            v += 1;
        }
        assert_eq!(
            values.len(),
            len,
            "consistent pair must fill every descending interval"
        );
        values.sort_unstable_by(|a, b| b.cmp(a));
        word[lo..hi].copy_from_slice(&values);
    }
    Permutation::from_word_unchecked(word)
}

// ---------------------------------------------------------------------------
// Public bijections
// ---------------------------------------------------------------------------

/// Reads the consistent pair `(run lengths, {n} + ascent positions)` off a
/// member of Av'(231).
pub fn theta1(pi: &Permutation) -> Result<ConsistentPair, BijectionError> {
    check_av_prime_231(pi)?;
    Ok(read_pair_by_asc(pi))
}

/// Builds the member of Av'(231) prescribed by the pair's run lengths and
/// ascent-top values.
pub fn theta2(pair: &ConsistentPair) -> Permutation {
    build_by_atop(pair)
}

/// Recovers the pair from a permutation built by [`theta2`].
pub fn theta2_inv(pi: &Permutation) -> Result<ConsistentPair, BijectionError> {
    check_av_prime_231(pi)?;
    Ok(read_pair_by_atop(pi))
}

/// Transforms ascent positions into ascent-top values on Av'(231),
/// preserving the inverse-descent-run lengths.
pub fn theta_prime(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_av_prime_231(pi)?;
    Ok(theta_prime_raw(pi))
}

pub(crate) fn theta_prime_raw(pi: &Permutation) -> Permutation {
    build_by_atop(&read_pair_by_asc(pi))
}

/// Inverse of [`theta_prime`]: reads the run lengths and ascent-top values
/// off the image and rebuilds through the ascent-position construction.
pub fn theta_prime_inv(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_av_prime_231(pi)?;
    Ok(theta_prime_inv_raw(pi))
}

pub(crate) fn theta_prime_inv_raw(pi: &Permutation) -> Permutation {
    build_by_asc(&read_pair_by_atop(pi))
}

fn map_blocks(
    pi: &Permutation,
    map_block: impl Fn(&Permutation) -> Permutation,
) -> Permutation {
    pi.decompose_direct_sum()
        .into_iter()
        .map(|block| {
            debug_assert_eq!(
                block.value_at(1) as usize,
                block.len(),
                "sum-indecomposable blocks of a 231-avoider begin with their maximum"
            );
            map_block(&block)
        })
        .reduce(|acc, b| acc.direct_sum(&b))
        .expect("decomposition of a non-empty permutation is non-empty")
}

/// Transforms the major index into makl on Av(231): applies
/// [`theta_prime`] to every block of the finest direct-sum decomposition.
pub fn theta(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_av231(pi)?;
    Ok(theta_raw(pi))
}

pub(crate) fn theta_raw(pi: &Permutation) -> Permutation {
    map_blocks(pi, theta_prime_raw)
}

/// Inverse of [`theta`].
pub fn theta_inv(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_av231(pi)?;
    Ok(theta_inv_raw(pi))
}

pub(crate) fn theta_inv_raw(pi: &Permutation) -> Permutation {
    map_blocks(pi, theta_prime_inv_raw)
}

/// Transforms bast into foze on Av(312): conjugates [`theta`] by
/// reverse-complement.
pub fn big_theta(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_av312(pi)?;
    Ok(big_theta_raw(pi))
}

pub(crate) fn big_theta_raw(pi: &Permutation) -> Permutation {
    theta_raw(&pi.reverse().complement()).reverse().complement()
}

/// Inverse of [`big_theta`].
pub fn big_theta_inv(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_av312(pi)?;
    Ok(big_theta_inv_raw(pi))
}

pub(crate) fn big_theta_inv_raw(pi: &Permutation) -> Permutation {
    theta_inv_raw(&pi.reverse().complement())
        .reverse()
        .complement()
}

/// The Simion-Schmidt map: keeps the left-to-right maxima in place and
/// rearranges the remaining entries in increasing order. Sends Av(312) to
/// Av(321) and transforms fozepp into the inversion number.
pub fn psi(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_av312(pi)?;
    Ok(psi_raw(pi))
}

pub(crate) fn psi_raw(pi: &Permutation) -> Permutation {
    let n = pi.len();
    let (mut word, is_max, rest) = split_by_maxima(pi);
    let mut next = rest.into_iter();
    for i in 1..=n {
        if !is_max[i] {
            word[i - 1] = next.next().unwrap();
        }
    }
    Permutation::from_word_unchecked(word)
}

/// Inverse of [`psi`]: restores the unique 312-avoiding preimage with the
/// same left-to-right maxima. Each non-maximum position receives the largest
/// remaining value below the running maximum; anything smaller would leave a
/// larger sub-maximum value to appear later and complete a 312 with the
/// running maximum.
pub fn psi_inv(pi: &Permutation) -> Result<Permutation, BijectionError> {
    check_avoids(
        pi,
        {
            static P: OnceLock<VincularPattern> = OnceLock::new();
            P.get_or_init(|| "3-2-1".parse().unwrap())
        },
        "3-2-1",
        "Av(321)",
    )?;
    let n = pi.len();
    let (mut word, is_max, mut rest) = split_by_maxima(pi);
    let mut running = 0u32;
    for i in 1..=n {
        if is_max[i] {
            running = word[i - 1];
            continue;
        }
        let below = rest.partition_point(|&v| v < running);
        debug_assert!(below > 0, "every 321-avoider has a 312-avoiding preimage");
        word[i - 1] = rest.remove(below - 1);
    }
    Ok(Permutation::from_word_unchecked(word))
}

/// Word with only the left-to-right maxima placed, the maxima flags, and the
/// remaining values in increasing order.
fn split_by_maxima(pi: &Permutation) -> (Vec<u32>, Vec<bool>, Vec<u32>) {
    let n = pi.len();
    let mut word = vec![0u32; n];
    let mut is_max = vec![false; n + 1];
    for i in pi.ltr_max_positions() {
        is_max[i] = true;
        word[i - 1] = pi.value_at(i);
    }
    let mut rest: Vec<u32> = (1..=n)
        .filter(|&i| !is_max[i])
        .map(|i| pi.value_at(i))
        .collect();
    rest.sort_unstable();
    (word, is_max, rest)
}

// ---------------------------------------------------------------------------
// Named bijection expressions
// ---------------------------------------------------------------------------

/// One stage of a bijection expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Reverse,
    Complement,
    Invert,
    Theta1,
    Theta2,
    ThetaPrime,
    ThetaPrimeInv,
    Theta,
    ThetaInv,
    BigTheta,
    BigThetaInv,
    Psi,
    PsiInv,
}

impl Step {
    fn parse(name: &str) -> Result<Self, BijectionError> {
        Ok(match name {
            "reverse" => Step::Reverse,
            "complement" => Step::Complement,
            "invert" => Step::Invert,
            "theta1" => Step::Theta1,
            "theta2" => Step::Theta2,
            "theta_prime" => Step::ThetaPrime,
            "theta_prime_inv" => Step::ThetaPrimeInv,
            "theta" => Step::Theta,
            "theta_inv" => Step::ThetaInv,
            "big_theta" => Step::BigTheta,
            "big_theta_inv" => Step::BigThetaInv,
            "psi" => Step::Psi,
            "psi_inv" => Step::PsiInv,
            other => return Err(BijectionError::UnknownName(other.to_string())),
        })
    }

    fn name(self) -> &'static str {
        match self {
            Step::Reverse => "reverse",
            Step::Complement => "complement",
            Step::Invert => "invert",
            Step::Theta1 => "theta1",
            Step::Theta2 => "theta2",
            Step::ThetaPrime => "theta_prime",
            Step::ThetaPrimeInv => "theta_prime_inv",
            Step::Theta => "theta",
            Step::ThetaInv => "theta_inv",
            Step::BigTheta => "big_theta",
            Step::BigThetaInv => "big_theta_inv",
            Step::Psi => "psi",
            Step::PsiInv => "psi_inv",
        }
    }

    fn apply(self, value: Value, checked: bool) -> Result<Value, BijectionError> {
        let want_perm = |value: Value| -> Result<Permutation, BijectionError> {
            match value {
                Value::Perm(pi) => Ok(pi),
                Value::Pair(_) => Err(BijectionError::TypeMismatch {
                    stage: self.name(),
                    expected: "a permutation",
                }),
            }
        };
        let want_pair = |value: Value| -> Result<ConsistentPair, BijectionError> {
            match value {
                Value::Pair(pair) => Ok(pair),
                Value::Perm(_) => Err(BijectionError::TypeMismatch {
                    stage: self.name(),
                    expected: "a consistent pair",
                }),
            }
        };
        Ok(match self {
            Step::Reverse => Value::Perm(want_perm(value)?.reverse()),
            Step::Complement => Value::Perm(want_perm(value)?.complement()),
            Step::Invert => Value::Perm(want_perm(value)?.invert()),
            Step::Theta1 => {
                let pi = want_perm(value)?;
                if checked {
                    Value::Pair(theta1(&pi)?)
                } else {
                    Value::Pair(read_pair_by_asc(&pi))
                }
            }
            Step::Theta2 => Value::Perm(theta2(&want_pair(value)?)),
            Step::ThetaPrime => {
                let pi = want_perm(value)?;
                Value::Perm(if checked { theta_prime(&pi)? } else { theta_prime_raw(&pi) })
            }
            Step::ThetaPrimeInv => {
                let pi = want_perm(value)?;
                Value::Perm(if checked {
                    theta_prime_inv(&pi)?
                } else {
                    theta_prime_inv_raw(&pi)
                })
            }
            Step::Theta => {
                let pi = want_perm(value)?;
                Value::Perm(if checked { theta(&pi)? } else { theta_raw(&pi) })
            }
            Step::ThetaInv => {
                let pi = want_perm(value)?;
                Value::Perm(if checked { theta_inv(&pi)? } else { theta_inv_raw(&pi) })
            }
            Step::BigTheta => {
                let pi = want_perm(value)?;
                Value::Perm(if checked { big_theta(&pi)? } else { big_theta_raw(&pi) })
            }
            Step::BigThetaInv => {
                let pi = want_perm(value)?;
                Value::Perm(if checked {
                    big_theta_inv(&pi)?
                } else {
                    big_theta_inv_raw(&pi)
                })
            }
            Step::Psi => {
                let pi = want_perm(value)?;
                Value::Perm(if checked { psi(&pi)? } else { psi_raw(&pi) })
            }
            Step::PsiInv => Value::Perm(psi_inv(&want_perm(value)?)?),
        })
    }
}

/// A value flowing through a bijection pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Perm(Permutation),
    Pair(ConsistentPair),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Perm(pi) => write!(f, "{pi}"),
            Value::Pair(pair) => write!(f, "{pair}"),
        }
    }
}

/// A composition of named bijections, written `f∘g` (or `f.g`). The
/// right-most stage applies first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionExpr {
    steps: Vec<Step>,
    text: String,
}

impl BijectionExpr {
    pub fn parse(text: &str) -> Result<Self, BijectionError> {
        let steps: Vec<Step> = text
            .split(['∘', '.'])
            .map(str::trim)
            .map(Step::parse)
            .collect::<Result<_, _>>()?;
        if steps.is_empty() {
            return Err(BijectionError::UnknownName(text.to_string()));
        }
        Ok(Self {
            steps,
            text: text.to_string(),
        })
    }

    /// Runs the pipeline with domain checks at every stage.
    pub fn apply(&self, input: Value) -> Result<Value, BijectionError> {
        self.run(input, true)
    }

    /// Permutation-to-permutation convenience wrapper.
    pub fn apply_perm(&self, pi: &Permutation) -> Result<Permutation, BijectionError> {
        match self.apply(Value::Perm(pi.clone()))? {
            Value::Perm(result) => Ok(result),
            Value::Pair(_) => Err(BijectionError::TypeMismatch {
                stage: "result",
                expected: "a permutation",
            }),
        }
    }

    /// Bulk-mode bypass: skips domain checks. Only for callers that
    /// guarantee membership, e.g. when iterating a generator whose family
    /// equals the expression's domain.
    pub(crate) fn apply_perm_trusted(&self, pi: &Permutation) -> Result<Permutation, BijectionError> {
        match self.run(Value::Perm(pi.clone()), false)? {
            Value::Perm(result) => Ok(result),
            Value::Pair(_) => Err(BijectionError::TypeMismatch {
                stage: "result",
                expected: "a permutation",
            }),
        }
    }

    fn run(&self, mut value: Value, checked: bool) -> Result<Value, BijectionError> {
        for step in self.steps.iter().rev() {
            value = step.apply(value, checked)?;
        }
        Ok(value)
    }

    /// The family the whole expression is guaranteed on, when it is a single
    /// stage with a known domain. Used to decide whether membership is
    /// implied by a generator and the per-member checks can be skipped.
    pub(crate) fn known_domain(&self) -> Option<&'static str> {
        if self.steps.len() != 1 {
            return None;
        }
        match self.steps[0] {
            Step::Reverse | Step::Complement | Step::Invert => Some("all"),
            Step::Theta | Step::ThetaInv => Some("av:2-3-1"),
            Step::BigTheta | Step::BigThetaInv | Step::Psi => Some("av:3-1-2"),
            Step::PsiInv => Some("av:3-2-1"),
            Step::Theta1 | Step::ThetaPrime | Step::ThetaPrimeInv => Some("avp:231"),
            Step::Theta2 => None,
        }
    }
}

impl fmt::Display for BijectionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

impl FromStr for BijectionExpr {
    type Err = BijectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BijectionExpr::parse(s)
    }
}
