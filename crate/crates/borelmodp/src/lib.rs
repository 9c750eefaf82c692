//! Exact mod-p computations for the Borel subgroup of GL2(Q_p): binomial
//! sequence spaces, tree-supported induced representations, explicit
//! (phi, Gamma)-modules over E((X)) and Hecke operators.

pub mod arith;
pub mod borel;
pub mod error;
pub mod linalg;
pub mod phigamma;
pub mod par;
pub mod sample;
pub mod seqspace;
pub mod series;
pub mod suites;

pub use error::{Error, Result};
