//! Solvable discrete-time dynamical systems obtained from the zeros of
//! time-dependent monic polynomials whose coefficients follow a solvable
//! recursion.
//!
//! The crate is `no_std` (it needs `alloc`). Layers, bottom up:
//!
//! * [`numerics`]: Vieta maps, the simultaneous root finder, orderings.
//! * [`matching`]: assignment solvers used by contiguity ordering and the
//!   set metric.
//! * [`seeds`]: coefficient recursions with a one-step map and a closed form.
//! * [`engine`]: generation zero and the generation lift.
//! * [`analysis`]: period detection and parameter classification.
//! * [`presets`]: the frozen worked examples.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod engine;
mod error;
pub mod matching;
pub mod numerics;
pub mod presets;
pub mod seeds;

pub use error::{Error, Result};
pub use num_complex::Complex64;
