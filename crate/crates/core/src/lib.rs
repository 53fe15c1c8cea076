//! Multi-slice and Petrov-Galerkin projectors for discretized variational
//! problems, with the matching a-priori error bounds.
//!
//! Everything works in `R^N` with a symmetric positive definite metric.
//! Vectors are `nalgebra` columns; families of vectors are stored column-wise.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod linalg;
pub mod problems;
pub mod random;
pub mod solvers;
pub mod spaces;
pub mod spectral;

#[cfg(any(test, feature = "oracles"))]
pub mod oracles;

pub use error::{Error, Result};
