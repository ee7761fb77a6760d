//! Exact simulation of the amplitude-amplified zero-knowledge simulator for
//! the graph-isomorphism proof system.
//!
//! The crate is organised bottom-up:
//!
//! - [`registers`]: tensor-product state algebra (states, operators,
//!   channels, distances).
//! - [`symm`]: permutations of `n` vertices, graphs, and their basis codes.
//! - [`protocol`]: the honest/adversarial verifier and the real view of one
//!   protocol round.
//! - [`simulator`]: the unitary simulator `A`, the success projector, the
//!   phase operators and the single amplification step that turns a
//!   success-probability-½ simulator into a perfect one.
//! - [`amplify`]: the same machinery for an arbitrary input-independent
//!   success probability λ, including the invariant two-dimensional
//!   subspace, phase solving and the measure-and-reflect schedule.
//!
//! All checks are exact up to floating point; there is no sampling anywhere
//! in the acceptance path.

pub mod amplify;
pub mod error;
pub mod protocol;
pub mod registers;
pub mod simulator;
pub mod symm;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};

/// Tolerance for operator identities.
pub const OP_TOL: f64 = 1e-10;
/// Tolerance for norm and trace preservation.
pub const NORM_TOL: f64 = 1e-12;
/// Below this norm a vector is treated as the zero vector.
pub const ZERO_NORM: f64 = 1e-12;
