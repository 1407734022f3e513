//! Finite set-theoretic solutions of the Yang-Baxter equation.
//!
//! A solution is stored as two permutation tables `λ` and `ρ` on `0..n`. On top of that the crate
//! provides retracts and multipermutation level, racks, the structure monoid word calculus, the
//! nilpotency condition for structure monoids, and finite skew braces.

#![allow(clippy::needless_range_loop)]

pub mod brace;
pub mod document;
pub mod enumerate;
pub mod fixtures;
pub mod monoid;
pub mod nilpotency;
pub mod perm;
pub mod rack;
pub mod report;
pub mod retract;
pub mod solution;

pub use perm::{Perm, PermGroup};
pub use solution::{Solution, SolutionError};
