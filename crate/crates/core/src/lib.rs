//! Driven-dissipative transport of strongly interacting dark-state
//! polaritons on a 1D lattice.
//!
//! The pipeline runs from the single-polariton band structure of the
//! four-component light-matter Hamiltonian, through Wannier functions and an
//! interacting hard-core spin model, to open-system many-body dynamics
//! (exact master equation, wave-function Monte Carlo, and a variational
//! product-state method) and photon-correlation observables.

pub mod band;
pub mod lattice;
pub mod config;
pub mod error;
pub mod numerics;
pub mod par;

pub use config::{PhysicalConfig, RunPlan};
pub use error::{Error, Result};
