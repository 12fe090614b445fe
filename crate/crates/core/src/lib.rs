//! Dispersive four-wave mixing of two counterpropagating quantum fields
//! driven by a classical standing-wave pump.
//!
//! The effective interaction is a beamsplitter between the forward mode `a`
//! and the backward mode `b`, parameterized by a self-phase term `chi` and a
//! cross-coupling `sigma`. This crate provides
//!
//! - [`params`]: physical parameters, derived couplings and regime checks,
//! - [`scattering`]: the closed-form input-output map and a shooting solver,
//! - [`gaussian`]: Gaussian states pushed through that map,
//! - [`fock`]: a truncated Fock-space model of the atom-field system,
//! - [`config`] and [`sweep`]: text configs, presets and CSV sweeps.

pub mod config;
pub mod error;
pub mod fock;
pub mod gaussian;
mod ode;
pub mod params;
pub mod scattering;
pub mod sweep;

pub use config::{parse_config, preset, ConfigError, Coupling, Grid, SweepConfig, SweepMode};
pub use error::{FwmError, Result};
pub use gaussian::{GaussianState, InputSpec, ModeInput};
pub use params::{Couplings, PhysicalParams, Regime};
pub use scattering::SMatrix;
pub use sweep::{compute_sweep, run_sweep, SweepError, SweepTable};
