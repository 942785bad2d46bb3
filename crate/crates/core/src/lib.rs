//! Verification core for finite probabilistic theories.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised around five
//! areas:
//!
//! * [`tables`]: binary joint tables, multi-test behaviors, the determinant
//!   criterion and outcome-independence factorization.
//! * [`hvt`]: hidden-variable refinements of behaviors and the independence
//!   predicates they may satisfy.
//! * [`gpt`]: polytopal state spaces with the no-restriction effect set, a
//!   dense simplex engine, propositions, sharp states and complementarity.
//! * [`quantum`]: density matrices, POVMs, Born-rule tables, steering by
//!   partial application and the built-in cat scenarios.
//! * [`steering`]: assemblages, ensembles and both directions of the
//!   steering/determinant equivalence, with a randomized cross-check.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod gpt;
pub mod hvt;
pub mod quantum;
pub mod random;
pub mod space;
pub mod steering;
pub mod tables;

pub use error::{Error, Result};

/// Tolerance for probability comparisons.
pub const EPS: f64 = 1e-9;

/// Tolerance for accepting caller-supplied normalization before renormalizing.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Sums this close to one are left alone, so already-normalized data
/// passes through validation bit for bit.
pub const ROUNDING_SLACK: f64 = 8.0 * f64::EPSILON;
