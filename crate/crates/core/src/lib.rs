//! Exact computations around the multiplicative eigenvalue cone of a simple group:
//! quantum Schubert calculus on `G/P`, the facets and extremal rays of the cone,
//! Levi induction of rays and fusion-rule dimensions.

pub mod eigencone;
pub mod error;
pub mod induction;
pub mod linalg;
pub mod lp;
pub mod notation;
pub mod qschubert;
pub mod rootsys;
pub mod verlinde;

pub use error::{Error, Result};
