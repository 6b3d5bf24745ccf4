//! Invariants of product-one sequences over small finite groups.
//!
//! A *sequence* over a finite group `G` is a finite unordered multiset of
//! group elements.  It is *product-one* if its terms can be ordered so that
//! their product is the identity, and a *minimal* product-one sequence (an
//! atom) if it cannot be split into two non-trivial product-one
//! subsequences.  This crate computes, at desk scale and exhaustively:
//!
//! * product sets of a sequence and of all its sub-multisets,
//! * small and large Davenport constants with explicit witnesses,
//! * complete censuses of atoms of a given length, deduplicated under the
//!   automorphism group,
//! * the closed-form families of maximal-length atoms over dihedral and
//!   dicyclic groups, checked against the censuses,
//! * factorization length sets of the monoid of product-one sequences and
//!   the derived `rho_k`/`lambda_k` invariants.
//!
//! Everything is exact: searches enumerate canonical representatives with
//! sound pruning, and every closed-form value exposed by [`arith`] is
//! either matched against a search or reported as an honest bound.

pub mod arith;
pub mod atoms;
pub mod error;
pub mod group;
pub mod json;
pub mod seq;
pub mod verify;

pub use error::{Error, Result};
pub use group::{Element, ElementSet, FiniteGroup, Group, GroupKind, Homomorphism};
pub use seq::{ProductTable, Sequence, SmoothCertificate};

/// Default cap on the number of sub-multisets a product-set table may hold.
pub const DEFAULT_BUDGET: usize = 1 << 24;

#[cfg(doctest)]
mod book;
