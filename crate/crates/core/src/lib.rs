//! Exact join detection for numerical abstract domains.
//!
//! For each supported domain the crate decides whether the least upper bound
//! of two elements coincides with their set-theoretic union, and when it does
//! not, produces a certificate that can be checked independently.

pub mod bd;
pub mod boxes;
pub(crate) mod dd;
pub mod decision;
pub mod error;
pub mod graph;
pub mod linear;
pub mod nnc;
pub mod octagon;
pub mod oracle;
pub mod parse;
pub mod polyhedra;
pub mod powerset;
pub mod rational;
pub mod shape;

pub use decision::{Decision, Verdict};
pub use error::{Error, Result};
pub use rational::{ExtendedRational, Rational};
