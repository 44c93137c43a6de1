//! Entanglement detection from moments of the partially transposed state.
//!
//! The crate is organised bottom up: [`fock`] holds truncated two-mode density
//! operators and the brute-force moment oracle, [`criteria`] turns moment
//! vectors into separability tests, [`gaussian`] covers covariance-matrix
//! states, [`states`] builds the standard state families with closed-form
//! moments, [`circuits`] simulates the multicopy interferometric readout and
//! [`estimation`] adds finite-sample statistics on top.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod circuits;
pub mod criteria;
pub mod error;
pub mod estimation;
pub mod fock;
pub mod gaussian;
pub mod records;
pub mod states;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::ToleranceProfile;
