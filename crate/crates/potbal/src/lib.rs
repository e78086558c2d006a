//! Computational potential theory on the plane at desk scale: charge
//! distributions and their balayage onto vertical lines, logarithmic
//! interval measures, growth functions built from zero sets, dyadic
//! boundedness criteria, explicit balancing/uniformization constructions,
//! and small-set gauges (Hausdorff contents of variable radius).
//!
//! Everything is finite and deterministic: distributions are finitely many
//! atoms plus vertical lines, kernels are closed forms, reductions use
//! compensated summation in input order, and asymptotic claims are always
//! reported as sampled evidence with explicit tolerances, never as facts.
//!
//! # Quick start
//!
//! ```
//! use potbal::charge::{Atom, ChargeDistribution};
//! use potbal::logmeasure::ell_right;
//!
//! // A unit mass at z = 2 seen through the annulus 1 < |z| <= 3.
//! let nu = ChargeDistribution::from_atoms([Atom::new(2.0, 0.0, 1.0)]);
//! assert_eq!(ell_right(&nu, 1.0, 3.0), 0.5);
//! ```

pub mod balayage;
pub mod book;
pub mod charge;
pub mod cli;
pub mod construct;
pub mod criteria;
pub mod error;
pub mod logmeasure;
pub mod quad;
pub mod smallsets;
pub mod subfun;
pub mod verdict;

mod numeric;

/// Runs the README example as a doc-test.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

pub use error::{Error, Result};
