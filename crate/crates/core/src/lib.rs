//! Entanglement verification for two-qubit states.
//!
//! The crate builds Bell-CHSH operators from orthogonal spin-measurement
//! settings, compares their expectation values against the classical
//! (CHSH), Cirel'son and orthogonal-separable thresholds, relates them to the
//! negativity and fully entangled fraction of the state, and estimates how
//! often random states violate each threshold with a seeded Monte Carlo
//! harness.
//!
//! Module map:
//!
//! - [`linalg`]: fixed-size complex matrices and a Jacobi Hermitian eigensolver.
//! - [`qstate`]: pure and mixed states, partial transpose, negativity,
//!   fully entangled fraction.
//! - [`bell`]: measurement directions, operator families, expectation values,
//!   threshold classification and the settings optimizer.
//! - [`sampling`]: seeded random ensembles (Haar pure, product-measure mixed,
//!   separable mixtures).
//! - [`montecarlo`]: sharded violation-statistics harness with Wilson intervals.
//! - [`cli`]: the `estimate`, `verify` and `bound` commands and their file formats.
//!
//! Basis order is `|00>, |01>, |10>, |11>` everywhere, with party A as the
//! left tensor factor.

#![forbid(unsafe_code)]

pub mod bell;
pub mod cli;
mod error;
pub mod linalg;
pub mod montecarlo;
pub mod qstate;
pub mod sampling;

pub use error::{Error, Result};
