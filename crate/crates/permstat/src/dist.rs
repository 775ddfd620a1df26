//! The distribution engine: evaluates an integer statistic over every member
//! of a permutation set and accumulates the counts into a [`QPolynomial`].
//!
//! With the `parallel` feature the work fans out over disjoint prefix
//! partitions of the enumeration tree and the partial polynomials are summed;
//! coefficient addition is associative and commutative, so the result is
//! identical to the sequential fallback regardless of schedule.

use thiserror::Error;

use crate::perm::Permutation;
use crate::qpoly::QPolynomial;
use crate::sets::{Guard, SetError, SetSpec};
use crate::stats::{self, StatError, StatKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Stat(#[from] StatError),
}

/// Prefix depth of the parallel fan-out; two levels give up to `n(n-1)`
/// independent subtrees, plenty for desk-scale sets.
const PARTITION_DEPTH: usize = 2;

/// Distribution of a registered integer statistic over the set.
pub fn distribution(spec: &SetSpec, stat: &str) -> Result<QPolynomial, DistError> {
    distribution_with_guard(spec, stat, &Guard::DEFAULT)
}

pub fn distribution_with_guard(
    spec: &SetSpec,
    stat: &str,
    guard: &Guard,
) -> Result<QPolynomial, DistError> {
    let stat = resolve_integer_stat(stat)?;
    distribution_with_fn_guard(spec, guard, move |pi| stat.eval_count(pi))
}

/// Distribution of an arbitrary integer-valued function over the set.
pub fn distribution_with<F>(spec: &SetSpec, eval: F) -> Result<QPolynomial, DistError>
where
    F: Fn(&Permutation) -> u64 + Sync,
{
    distribution_with_fn_guard(spec, &Guard::DEFAULT, eval)
}

/// Single-threaded reference path; always available and used by the
/// benchmarks as the baseline the parallel engine is compared against.
pub fn distribution_seq(spec: &SetSpec, stat: &str) -> Result<QPolynomial, DistError> {
    distribution_seq_with_guard(spec, stat, &Guard::DEFAULT)
}

pub fn distribution_seq_with_guard(
    spec: &SetSpec,
    stat: &str,
    guard: &Guard,
) -> Result<QPolynomial, DistError> {
    let stat = resolve_integer_stat(stat)?;
    spec.check_guard(guard)?;
    Ok(sequential(spec, &move |pi: &Permutation| stat.eval_count(pi)))
}

fn resolve_integer_stat(name: &str) -> Result<stats::StatRef, StatError> {
    let stat = stats::lookup(name)?;
    if stat.kind() != StatKind::Integer {
        return Err(StatError::SetKind(stat.name()));
    }
    Ok(stat)
}

fn distribution_with_fn_guard<F>(
    spec: &SetSpec,
    guard: &Guard,
    eval: F,
) -> Result<QPolynomial, DistError>
where
    F: Fn(&Permutation) -> u64 + Sync,
{
    spec.check_guard(guard)?;

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let prefixes = spec.partition_prefixes(PARTITION_DEPTH);
        Ok(prefixes
            .into_par_iter()
            .map(|prefix| {
                let mut partial = QPolynomial::zero();
                spec.visit_completions(&prefix, &mut |pi| partial.bump(eval(pi)));
                partial
            })
            .reduce(QPolynomial::zero, |a, b| a + b))
    }

    #[cfg(not(feature = "parallel"))]
    Ok(sequential(spec, &eval))
}

fn sequential<F>(spec: &SetSpec, eval: &F) -> QPolynomial
where
    F: Fn(&Permutation) -> u64,
{
    let mut poly = QPolynomial::zero();
    spec.visit_completions(&[], &mut |pi| poly.bump(eval(pi)));
    poly
}
