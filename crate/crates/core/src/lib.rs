//! Exact computer algebra for webs of type Q.
//!
//! The crate provides exact arithmetic over ℚ(i, √2), sparse super-matrices,
//! the Sergeev superalgebra, shifted tableau combinatorics, a typed DSL for
//! oriented webs, and the evaluation functor to q(n)-module maps.

pub mod catalog;
pub mod error;
pub mod linalg;
pub mod qfunctor;
pub mod scalar;
pub mod sergeev;
pub mod shifted;
pub mod web;

pub use error::{Error, ParseError, Result};
pub use linalg::{GradedBasis, Parity, SuperMatrix};
pub use scalar::{Rational, Scalar};
pub use sergeev::{Perm, SergeevElt};
pub use shifted::{ShiftedTableau, StrictPartition};
pub use web::{ObjectWord, WebExpr};
