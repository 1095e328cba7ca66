//! Dynamical-systems analysis of mean-field coordinate ascent (CAVI) on the
//! two-spin Ising model.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! - [`scalar`]: parametric maps on `[0, 1]` with closed-form derivatives,
//!   fixed points, cycles and their stability.
//! - [`bifurcation`]: pitchfork / period-doubling condition checkers, parameter
//!   scans and bifurcation diagrams.
//! - [`ising`]: sequential and parallel CAVI updates, the exact ELBO, trajectory
//!   simulation and regime prediction.
//! - [`edward_sokal`]: the Edward–Sokal coupled objective, its partial
//!   derivatives and grid line-search coordinate updates.
//! - [`oracle`]: brute-force checks (finite differences, long-run period
//!   detection, exhaustive grids) used to validate everything above.
//!
//! IO, file formats and the command line live in the `cavi-cli` crate.

#![no_std]
#![deny(unsafe_code)]
// `!(a < b)` is the NaN-rejecting form used throughout for argument checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bifurcation;
pub mod edward_sokal;
mod error;
pub mod ising;
pub(crate) mod math;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
