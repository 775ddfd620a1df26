//! Permutation statistics on pattern-avoiding classes: vincular-pattern
//! machinery, Mahonian statistics, equidistribution bijections, and exact
//! distribution polynomials, all verifiable by exhaustive desk-scale
//! enumeration.
//!
//! The crate is organized around a small immutable [`Permutation`] value:
//!
//! - [`pattern`] parses and counts vincular patterns (`2-31` style grammar);
//! - [`stats`] is the registry of named statistics and class-restricted
//!   closed forms;
//! - [`sets`] enumerates the symmetric group and avoidance classes with
//!   prefix-pruned backtracking behind cardinality guards;
//! - [`bijections`] holds the consistent-pair stack construction and the
//!   maps built from it (`theta_prime`, `theta`, `big_theta`, `psi`);
//! - [`dist`] evaluates distribution polynomials (in parallel with the
//!   default `parallel` feature, sequentially otherwise);
//! - [`discovery`] searches statistic pools for partition-compatible and
//!   bijection-invariant candidates.

pub mod bijections;
pub mod discovery;
pub mod dist;
pub mod pattern;
pub mod perm;
pub mod qpoly;
pub mod sets;
pub mod stats;

pub use bijections::{BijectionExpr, BijectionError, ConsistentPair, PairError};
pub use discovery::{DiscoveryError, DiscoveryReport, Verdict};
pub use dist::{distribution, distribution_seq, distribution_with, DistError};
pub use pattern::{PatternError, VincularPattern};
pub use perm::{PermError, Permutation, TrivialBijection};
pub use qpoly::{equidistributed, q_factorial, QPolynomial};
pub use sets::{Guard, SetError, SetFamily, SetSpec};
pub use stats::{StatError, StatKind, StatValue};
