//! Exact integer and polyhedral computations for presenting a toric variety
//! as a graded quotient: support function lattices over a fan, the quotient
//! cone with its lifted fan, and the graded monomial ring with its
//! irrelevant ideal and section spaces.
//!
//! All arithmetic is arbitrary-precision and exact; nothing in this crate
//! touches floating point.

pub mod error;
pub mod fan;
pub mod graded;
pub mod linalg;
pub mod polyhedral;
pub mod quotient;
pub mod support;

pub use error::{Error, Result};

pub use linalg::{Int, LatticeMatrix, LatticeVector, Rat};
pub use polyhedral::Cone;

