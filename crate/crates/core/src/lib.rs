//! Pseudo-spectral laboratory for periodic 3-D incompressible flow and its
//! two-viscosity regularization: exact spectral operators, Helmholtz
//! decomposition, stiff coupled time integration, a norm ledger, the
//! scalar constant chain with its fixed-point solver, and inequality audits
//! along simulated trajectories.

pub mod auditor;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod fft;
pub mod field;
pub mod grid;
pub mod helmholtz;
pub mod io;
pub mod ledger;
pub mod norms;
pub mod ops;

pub use error::{Error, Result};
