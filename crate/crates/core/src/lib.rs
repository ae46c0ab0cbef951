//! Steady-state simulator and analysis toolkit for phonon blockade in a
//! quadratically coupled optomechanical system.
//!
//! The crate builds the effective photon-two-phonon Hamiltonian, solves the
//! Lindblad master equation for its steady state in truncated Fock spaces,
//! extracts the second-order phonon correlation g2(0) and related
//! observables, and cross-validates everything against independent
//! closed-form expressions.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod liouville;
pub mod model;
pub mod observables;
pub mod quantum;
pub mod sweep;

pub use cli::run;
pub use error::{Error, Result};
