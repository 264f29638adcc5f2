//! Exact arithmetic for positive-definite integral lattices.
//!
//! Lattices are handled through their Gram matrices. Everything is computed
//! with integers or exact rationals: determinants, duals, LLL reduction,
//! short-vector enumeration, embedding search, orthogonal decomposition and
//! bounded verification of universality criterion sets.

pub mod catalog;
pub mod cli;
pub mod criterion;
pub mod decomposition;
pub mod embedding;
pub mod enumeration;
pub mod error;
pub mod expr;
pub mod gram;
pub mod hnf;
mod intops;
pub mod rational;
pub mod reduction;
pub mod suite;


pub use catalog::catalog;
pub use error::{LatticeError, Result};
pub use expr::{parse_expr, LatticeExpr};
pub use gram::GramMatrix;
pub use rational::{RationalMatrix, RationalVector};
