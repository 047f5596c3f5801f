//! Exact dimension calculus for operads and properads.
//!
//! The crate is split into four layers:
//!
//! * [`combinatorics`]: block permutations and connected permutations.
//! * [`dims`]: weight-graded dimension tables and their connected products.
//! * [`nsoperad`]: planar trees, quadratic duals, bar differential and Koszul complexes
//!   for non-symmetric quadratic operads.
//! * [`poincare`]: truncated power series and the functional equations relating a
//!   Koszul pair.
//!
//! All arithmetic is exact over the rationals.

pub mod combinatorics;
pub mod dims;
mod error;
pub mod linalg;
pub mod nsoperad;
pub mod poincare;
pub mod rational;

pub use error::{Error, Result};
