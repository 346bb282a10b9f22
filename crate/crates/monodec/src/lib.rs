//! Semigroups of monotone and order-decreasing partial transformations on a
//! finite chain, together with their injective counterparts.
//!
//! The crate works with partial self-maps of the chain `{1 < 2 < … < n}` and
//! provides:
//!
//! - exact, `Copy`-able [`PartialTransformation`] values with all the order
//!   predicates (preserving, reversing, monotone, decreasing, extensive,
//!   injective) and a canonical text grammar;
//! - constructive enumerators and a brute-force filter oracle for every
//!   named transformation family ([`families`]);
//! - exact (big-integer) counting formulas, recursions and rank formulas
//!   ([`counting`]);
//! - named generating sets, a worklist closure engine, factorization of
//!   order-reversing elements through the canonical generators, and rank
//!   verification ([`generation`]);
//! - Green's relations, starred Green's relations, regularity, abundance
//!   and maximal-subsemigroup catalogs computed from first principles
//!   ([`structure`]).
//!
//! Everything is deterministic: enumerators and semigroup element lists are
//! sorted by the canonical text form, and all counting is done in exact
//! integer arithmetic.

pub mod counting;
pub mod error;
pub mod families;
pub mod generation;
pub mod pt;
pub mod report;
pub mod structure;

pub use error::{Error, Result};
pub use families::{Family, FamilySpec, LayerKind, LayerSpec};
pub use generation::{ClosureResult, Factorization, GeneratingSet, Semigroup};
pub use pt::{KernelPartition, PartialTransformation, MAX_DEGREE};
pub use report::{Assertion, Report, Status};
