//! Exact analysis of admissible homogeneous linear systems `M x = 0` over the
//! integers, and Monte Carlo experiments on binomial random subsets of
//! `{1, .., n}`.
//!
//! The crate computes, for a system:
//!
//! * the threshold exponent `c(M)` maximized over column subsets,
//! * the symmetry group of column permutations preserving the row space,
//! * trivial and non-trivial solution structure via derived systems,
//! * (strict) balancedness,
//! * the polytope volume as the leading Ehrhart coefficient,
//!
//! and then samples random sets to compare the count of non-trivial solutions
//! against the predicted threshold and Poisson law.

pub mod census;
pub mod ehrhart;
pub mod lattice;
pub mod linalg;
pub mod par;
pub mod partition;
pub mod simulate;
pub mod structure;
pub mod system;

#[cfg(test)]
mod testing;

pub use linalg::{Rational, RationalMatrix, RationalVector};
pub use par::Execution;
pub use partition::SetPartition;
pub use system::{AdmissibilityReport, Family, LinearSystem};
