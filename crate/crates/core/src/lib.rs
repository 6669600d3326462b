//! Solver for the damped Kirchhoff beam on a domain whose ends move as
//! `x = K(t) y`.
//!
//! The problem is transported to a fixed box, discretized with clamped C1
//! Hermite elements, advanced with the three-level Newmark-theta scheme and
//! solved at each step with Newton's method. The [`verification`] module
//! holds manufactured solutions, error norms, convergence studies and the
//! energy functional.

// Index loops mirror the element formulas; NaN-rejecting `!(x > 0.0)` checks are deliberate.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod band;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod hermite;
pub mod integrator;
pub mod mesh;
pub mod quadrature;
pub mod verification;

pub use error::{BeamError, Result};
pub use exec::Execution;
