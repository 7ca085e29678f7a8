//! Orthogonal and paraorthogonal polynomials on the unit circle.
//!
//! The crate builds monic orthogonal polynomials from Verblunsky coefficient
//! sequences and locates the zeros of their paraorthogonal companions through
//! the continuous Prüfer phase, which turns zero finding into `n` independent
//! monotone bisections costing `O(n)` each. Around that core sit the truncated
//! CMV operator (banded, `O(n)` mat-vec), trial-vector residuals, the
//! Carathéodory-function pole scan for pure points, and the experiment drivers
//! behind the `opuc` binary.
//!
//! Work that fans out over independent items (zero branches, random trials,
//! grid points) goes through [`exec::Exec`], which uses rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise.

// `!(x < y)` rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Banded and triangular kernels index several arrays by one offset.
#![allow(clippy::needless_range_loop)]

pub mod cmv;
pub mod dd;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod measures;
pub mod phase;
pub mod szego;
pub mod verblunsky;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `2π`, spelled once.
pub const TAU: f64 = std::f64::consts::TAU;
