//! Computational machinery for prefix monoids of groups and right units of
//! special inverse monoids.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, file formats and the command line live in the
//! companion `prefmon` crate.
//!
//! - [`words`]: alphabets, signed letters, free reduction.
//! - [`presentation`]: group / monoid / inverse monoid presentations and the
//!   text syntax for them.
//! - [`stallings`]: folded subgroup automata of free groups.
//! - [`oracle`]: word-problem oracles, free product normal forms and
//!   Britton reduction in HNN extensions.
//! - [`munn`]: Munn trees and the free inverse monoid word problem.
//! - [`constructions`]: prefix generators and the presentation transformers.
//! - [`greens`]: Green's relations and Schützenberger groups of submonoids
//!   of groups.
//! - [`enumerate`]: dovetailing and bounded rewriting semideciders.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constructions;
pub mod enumerate;
pub mod greens;
pub mod munn;
pub mod oracle;
pub mod presentation;
pub mod stallings;
pub mod words;

pub use presentation::{Presentation, PresentationKind, Relation};
pub use words::{Alphabet, Letter, Word};
