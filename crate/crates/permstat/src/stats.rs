//! The statistic registry: descent/ascent sets and their flavours, the
//! Mahonian statistics and their vincular-pattern expressions, positional
//! inversion counts, and class-restricted closed-form evaluators.
//!
//! Names are stable identifiers usable from the CLI and config files.
//! Set-kind statistics capitalize the first letter (`Asc`, `Lmax`, ...);
//! integer statistics are lowercase. Appending `_i` to any name evaluates the
//! base statistic on the inverse permutation.

use std::sync::OnceLock;

use thiserror::Error;

use crate::pattern::{self, VincularPattern};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    Integer,
    PositionSet,
    ValueSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatValue {
    Count(u64),
    Positions(Vec<usize>),
    Values(Vec<u32>),
}

impl std::fmt::Display for StatValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn set<T: std::fmt::Display>(f: &mut std::fmt::Formatter<'_>, xs: &[T]) -> std::fmt::Result {
            write!(f, "{{")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")
        }
        match self {
            StatValue::Count(c) => write!(f, "{c}"),
            StatValue::Positions(ps) => set(f, ps),
            StatValue::Values(vs) => set(f, vs),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatError {
    #[error("unknown statistic {0:?}")]
    UnknownStat(String),
    #[error("statistic {0:?} is set-valued where an integer statistic is required")]
    SetKind(String),
    #[error("position {position} out of range 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("input must avoid {required}; witness occurrence at positions {witness:?}")]
    OutsideDomain {
        required: &'static str,
        witness: Vec<usize>,
    },
}

struct StatDef {
    name: &'static str,
    kind: StatKind,
    eval: fn(&Permutation) -> StatValue,
}

/// A resolved statistic, possibly composed with inversion.
#[derive(Clone, Copy)]
pub struct StatRef {
    def: &'static StatDef,
    inverted: bool,
}

impl StatRef {
    pub fn name(&self) -> String {
        if self.inverted {
            format!("{}_i", self.def.name)
        } else {
            self.def.name.to_string()
        }
    }

    pub fn kind(&self) -> StatKind {
        self.def.kind
    }

    pub fn eval(&self, pi: &Permutation) -> StatValue {
        if self.inverted {
            (self.def.eval)(&pi.invert())
        } else {
            (self.def.eval)(pi)
        }
    }

    /// Integer statistics only; panics on set-kind definitions.
    pub fn eval_count(&self, pi: &Permutation) -> u64 {
        match self.eval(pi) {
            StatValue::Count(c) => c,
            _ => panic!("eval_count on set-valued statistic {}", self.name()),
        }
    }
}

/// Resolves a name, peeling one optional `_i` suffix.
pub fn lookup(name: &str) -> Result<StatRef, StatError> {
    let (base, inverted) = match name.strip_suffix("_i") {
        Some(base) => (base, true),
        None => (name, false),
    };
    registry()
        .iter()
        .find(|def| def.name == base)
        .map(|def| StatRef { def, inverted })
        .ok_or_else(|| StatError::UnknownStat(name.to_string()))
}

pub fn eval_stat(name: &str, pi: &Permutation) -> Result<StatValue, StatError> {
    Ok(lookup(name)?.eval(pi))
}

/// Base statistic names in registry order.
pub fn registered_names() -> Vec<&'static str> {
    registry().iter().map(|def| def.name).collect()
}

/// The candidate pool used by the discovery searches: twenty integer
/// statistics, the inverse-composed variants included, sorted by name.
pub fn default_pool() -> Vec<&'static str> {
    vec![
        "asc", "des", "head", "head_i", "last", "last_i", "lds", "lir", "lir_i", "lis", "lmax",
        "lmin", "peak", "peak_i", "rank", "rmax", "rmin", "valley", "valley_i", "zeil",
    ]
}

// ---------------------------------------------------------------------------
// Direct evaluators
// ---------------------------------------------------------------------------

/// Number of pairs `i < j` with `pi_i > pi_j`.
pub fn inv(pi: &Permutation) -> u64 {
    let w = pi.word();
    let mut count = 0u64;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                count += 1;
            }
        }
    }
    count
}

/// Sum of descent positions.
pub fn maj(pi: &Permutation) -> u64 {
    pi.descent_positions().iter().map(|&i| i as u64).sum()
}

/// Number of inversions `(i, j)` with the left index fixed at `i` (1-based).
pub fn inv_at(pi: &Permutation, position: usize) -> Result<u64, StatError> {
    let n = pi.len();
    if position == 0 || position > n {
        return Err(StatError::PositionOutOfRange { position, n });
    }
    let w = pi.word();
    Ok(w[position..].iter().filter(|&&v| v < w[position - 1]).count() as u64)
}

/// Nearest left-to-right-maximum position that is `<= position`. Always
/// defined: position 1 is a left-to-right maximum.
pub fn plmax(pi: &Permutation, position: usize) -> Result<usize, StatError> {
    let n = pi.len();
    if position == 0 || position > n {
        return Err(StatError::PositionOutOfRange { position, n });
    }
    Ok(pi
        .ltr_max_positions()
        .into_iter()
        .take_while(|&j| j <= position)
        .last()
        .expect("position 1 is always a left-to-right maximum"))
}

fn head(pi: &Permutation) -> u64 {
    pi.value_at(1) as u64
}

fn last(pi: &Permutation) -> u64 {
    pi.value_at(pi.len()) as u64
}

/// Length of the initial ascending run.
fn lir(pi: &Permutation) -> u64 {
    let w = pi.word();
    let mut len = 1u64;
    for pair in w.windows(2) {
        if pair[0] < pair[1] {
            len += 1;
        } else {
            break;
        }
    }
    len
}

fn longest_monotone(pi: &Permutation, increasing: bool) -> u64 {
    let w = pi.word();
    let mut best = vec![1u64; w.len()];
    for i in 0..w.len() {
        for j in 0..i {
            let extends = if increasing { w[j] < w[i] } else { w[j] > w[i] };
            if extends {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.iter().copied().max().unwrap_or(0)
}

/// Longest strictly increasing subsequence length.
fn lis(pi: &Permutation) -> u64 {
    longest_monotone(pi, true)
}

/// Longest strictly decreasing subsequence length.
fn lds(pi: &Permutation) -> u64 {
    longest_monotone(pi, false)
}

/// Interior positions that exceed both neighbours.
fn peak(pi: &Permutation) -> u64 {
    let w = pi.word();
    w.windows(3).filter(|t| t[0] < t[1] && t[1] > t[2]).count() as u64
}

/// Interior positions below both neighbours.
fn valley(pi: &Permutation) -> u64 {
    let w = pi.word();
    w.windows(3).filter(|t| t[0] > t[1] && t[1] < t[2]).count() as u64
}

/// Largest `d` such that `n, n-1, .., n-d+1` occurs as a (scattered)
/// subsequence, i.e. the positions of those values increase.
fn zeil(pi: &Permutation) -> u64 {
    let n = pi.len() as u32;
    let mut d = 1u64;
    let mut prev = pi.position_of(n);
    for v in (1..n).rev() {
        let pos = pi.position_of(v);
        if pos > prev {
            d += 1;
            prev = pos;
        } else {
            break;
        }
    }
    d
}

/// Largest `i` such that every entry at position `<= i` exceeds `i`.
fn rank(pi: &Permutation) -> u64 {
    let w = pi.word();
    let mut min_prefix = u32::MAX;
    let mut best = 0u64;
    for i in 1..=w.len() {
        min_prefix = min_prefix.min(w[i - 1]);
        if min_prefix as usize > i {
            best = i as u64;
        } else {
            break;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Vincular-pattern expressions of the Mahonian statistics
// ---------------------------------------------------------------------------

fn parse_terms(texts: &[&str]) -> Vec<VincularPattern> {
    texts.iter().map(|t| t.parse().unwrap()).collect()
}

macro_rules! term_cache {
    ($fn_name:ident, $($text:literal),+) => {
        fn $fn_name() -> &'static [VincularPattern] {
            static TERMS: OnceLock<Vec<VincularPattern>> = OnceLock::new();
            TERMS.get_or_init(|| parse_terms(&[$($text),+]))
        }
    };
}

term_cache!(inv_terms, "23-1", "31-2", "32-1", "21");
term_cache!(maj_terms, "1-32", "2-31", "3-21", "21");
term_cache!(makl_terms, "1-32", "2-31", "32-1", "21");
term_cache!(bast_terms, "13-2", "21-3", "32-1", "21");
term_cache!(foze_terms, "21-3", "3-21", "13-2", "21");
// The doubled 31-2 term is deliberate: with multiplicity one the statistic
// stops being Mahonian already at n = 3.
term_cache!(fozepp_terms, "23-1", "31-2", "31-2", "21");

/// The vincular-pattern expression of a Mahonian statistic, when it has one
/// in the registry. `inv` and `maj` are evaluated directly but their
/// expressions are exposed so both routes can be compared.
pub fn vincular_expression(name: &str) -> Option<&'static [VincularPattern]> {
    match name {
        "inv" => Some(inv_terms()),
        "maj" => Some(maj_terms()),
        "makl" => Some(makl_terms()),
        "bast" => Some(bast_terms()),
        "foze" => Some(foze_terms()),
        "fozepp" => Some(fozepp_terms()),
        _ => None,
    }
}

fn makl(pi: &Permutation) -> u64 {
    pattern::pattern_sum(pi, makl_terms())
}

fn bast(pi: &Permutation) -> u64 {
    pattern::pattern_sum(pi, bast_terms())
}

fn foze(pi: &Permutation) -> u64 {
    pattern::pattern_sum(pi, foze_terms())
}

fn fozepp(pi: &Permutation) -> u64 {
    pattern::pattern_sum(pi, fozepp_terms())
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

fn positions_to_values(pi: &Permutation, positions: Vec<usize>) -> Vec<u32> {
    let mut values: Vec<u32> = positions.into_iter().map(|i| pi.value_at(i)).collect();
    values.sort_unstable();
    values
}

fn registry() -> &'static [StatDef] {
    macro_rules! defs {
        ($(($name:literal, $kind:ident, $eval:expr)),+ $(,)?) => {
            &[$(StatDef { name: $name, kind: StatKind::$kind, eval: $eval }),+]
        };
    }
    defs![
        ("Asc", PositionSet, |pi| StatValue::Positions(pi.ascent_positions())),
        ("asc", Integer, |pi| StatValue::Count(pi.ascent_positions().len() as u64)),
        ("Atop", ValueSet, |pi| {
            let tops = pi.ascent_positions().into_iter().map(|i| i + 1).collect();
            StatValue::Values(positions_to_values(pi, tops))
        }),
        ("Abot", ValueSet, |pi| {
            StatValue::Values(positions_to_values(pi, pi.ascent_positions()))
        }),
        ("Des", PositionSet, |pi| StatValue::Positions(pi.descent_positions())),
        ("des", Integer, |pi| StatValue::Count(pi.descent_positions().len() as u64)),
        ("Dtop", ValueSet, |pi| {
            StatValue::Values(positions_to_values(pi, pi.descent_positions()))
        }),
        ("Dbot", ValueSet, |pi| {
            let bots = pi.descent_positions().into_iter().map(|i| i + 1).collect();
            StatValue::Values(positions_to_values(pi, bots))
        }),
        ("Lmax", PositionSet, |pi| StatValue::Positions(pi.ltr_max_positions())),
        ("Lmaxl", ValueSet, |pi| {
            StatValue::Values(positions_to_values(pi, pi.ltr_max_positions()))
        }),
        ("lmax", Integer, |pi| StatValue::Count(pi.ltr_max_positions().len() as u64)),
        ("Lmin", PositionSet, |pi| StatValue::Positions(pi.ltr_min_positions())),
        ("Lminl", ValueSet, |pi| {
            StatValue::Values(positions_to_values(pi, pi.ltr_min_positions()))
        }),
        ("lmin", Integer, |pi| StatValue::Count(pi.ltr_min_positions().len() as u64)),
        ("Rmax", PositionSet, |pi| StatValue::Positions(pi.rtl_max_positions())),
        ("Rmaxl", ValueSet, |pi| {
            StatValue::Values(positions_to_values(pi, pi.rtl_max_positions()))
        }),
        ("rmax", Integer, |pi| StatValue::Count(pi.rtl_max_positions().len() as u64)),
        ("Rmin", PositionSet, |pi| StatValue::Positions(pi.rtl_min_positions())),
        ("Rminl", ValueSet, |pi| {
            StatValue::Values(positions_to_values(pi, pi.rtl_min_positions()))
        }),
        ("rmin", Integer, |pi| StatValue::Count(pi.rtl_min_positions().len() as u64)),
        ("inv", Integer, |pi| StatValue::Count(inv(pi))),
        ("maj", Integer, |pi| StatValue::Count(maj(pi))),
        ("makl", Integer, |pi| StatValue::Count(makl(pi))),
        ("bast", Integer, |pi| StatValue::Count(bast(pi))),
        ("foze", Integer, |pi| StatValue::Count(foze(pi))),
        ("fozepp", Integer, |pi| StatValue::Count(fozepp(pi))),
        ("head", Integer, |pi| StatValue::Count(head(pi))),
        ("last", Integer, |pi| StatValue::Count(last(pi))),
        ("lir", Integer, |pi| StatValue::Count(lir(pi))),
        ("lds", Integer, |pi| StatValue::Count(lds(pi))),
        ("lis", Integer, |pi| StatValue::Count(lis(pi))),
        ("peak", Integer, |pi| StatValue::Count(peak(pi))),
        ("valley", Integer, |pi| StatValue::Count(valley(pi))),
        ("zeil", Integer, |pi| StatValue::Count(zeil(pi))),
        ("rank", Integer, |pi| StatValue::Count(rank(pi))),
    ]
}

// ---------------------------------------------------------------------------
// Class-restricted closed forms
// ---------------------------------------------------------------------------

fn classical(text: &str) -> &'static VincularPattern {
    static P231: OnceLock<VincularPattern> = OnceLock::new();
    static P312: OnceLock<VincularPattern> = OnceLock::new();
    static P321: OnceLock<VincularPattern> = OnceLock::new();
    let cell = match text {
        "2-3-1" => &P231,
        "3-1-2" => &P312,
        "3-2-1" => &P321,
        _ => unreachable!("unsupported avoidance pattern"),
    };
    cell.get_or_init(|| text.parse().unwrap())
}

fn require_avoids(pi: &Permutation, text: &str, name: &'static str) -> Result<(), StatError> {
    match pattern::first_occurrence(pi, classical(text)) {
        None => Ok(()),
        Some(witness) => Err(StatError::OutsideDomain {
            required: name,
            witness,
        }),
    }
}

fn lmax_deficiency(pi: &Permutation) -> u64 {
    // Sum of pi_i - i over left-to-right-maximum positions; each term is
    // non-negative because a left-to-right maximum at position i exceeds the
    // i-1 entries before it.
    pi.ltr_max_positions()
        .into_iter()
        .map(|i| (pi.value_at(i) as u64) - (i as u64))
        .sum()
}

/// On 231-avoiders, the number of `2-13` occurrences is
/// `n - rmax - rmin + 1`.
pub fn adj213_on_av231(pi: &Permutation) -> Result<u64, StatError> {
    require_avoids(pi, "2-3-1", "Av(231)")?;
    let n = pi.len() as u64;
    let rmax = pi.rtl_max_positions().len() as u64;
    let rmin = pi.rtl_min_positions().len() as u64;
    // n + 1 >= rmax + rmin on the checked domain (the result is a count).
    Ok(n + 1 - rmax - rmin)
}

/// On 321-avoiders, every inversion starts at a left-to-right maximum, so
/// the inversion number is the sum of `pi_i - i` over those positions.
pub fn inv_on_av321(pi: &Permutation) -> Result<u64, StatError> {
    require_avoids(pi, "3-2-1", "Av(321)")?;
    Ok(lmax_deficiency(pi))
}

/// On 312-avoiders, the positional inversion count at `position` reduces to
/// the count at the nearest left-to-right maximum on its left.
pub fn inv_at_on_av312(pi: &Permutation, position: usize) -> Result<u64, StatError> {
    require_avoids(pi, "3-1-2", "Av(312)")?;
    let p = plmax(pi, position)?;
    let at_lmax = (pi.value_at(p) as u64) - (p as u64);
    Ok(at_lmax - (position - p) as u64)
}

/// On 312-avoiders, the number of `23-1` occurrences.
pub fn adj231_on_av312(pi: &Permutation) -> Result<u64, StatError> {
    require_avoids(pi, "3-1-2", "Av(312)")?;
    let n = pi.len() as u64;
    let lmax = pi.ltr_max_positions().len() as u64;
    // Summing before subtracting keeps the intermediate non-negative: on the
    // checked domain the result is an occurrence count, so
    // deficiency + lmax >= n.
    Ok(lmax_deficiency(pi) + lmax - n)
}

/// On 312-avoiders, `y` is a descent exactly when `y + 1` is not a
/// left-to-right maximum, so `des = n - lmax`.
pub fn des_on_av312(pi: &Permutation) -> Result<u64, StatError> {
    require_avoids(pi, "3-1-2", "Av(312)")?;
    Ok(pi.len() as u64 - pi.ltr_max_positions().len() as u64)
}

/// On 312-avoiders the whole fozepp expression collapses to the
/// left-to-right-maximum sum.
pub fn fozepp_on_av312(pi: &Permutation) -> Result<u64, StatError> {
    require_avoids(pi, "3-1-2", "Av(312)")?;
    Ok(lmax_deficiency(pi))
}

/// Dispatches the permutation-level closed forms by name. The positional
/// variant [`inv_at_on_av312`] takes an extra argument and is not reachable
/// from here.
pub fn closed_form(name: &str, pi: &Permutation) -> Result<u64, StatError> {
    match name {
        "adj213_on_av231" => adj213_on_av231(pi),
        "inv_on_av321" => inv_on_av321(pi),
        "adj231_on_av312" => adj231_on_av312(pi),
        "des_on_av312" => des_on_av312(pi),
        "fozepp_on_av312" => fozepp_on_av312(pi),
        other => Err(StatError::UnknownStat(other.to_string())),
    }
}
