//! Numerical toolkit for relativistic quantum information in flat and
//! expanding spacetimes.
//!
//! The crate is organised in four physics modules on top of a small
//! numerics layer:
//!
//! * [`gaussian`] — phase-space engine: symplectic propagators for
//!   time-dependent quadratic Hamiltonians, covariance-matrix evolution,
//!   Gaussian state constructors and entanglement measures.
//! * [`detector`] — nonperturbative oscillator detectors coupled to a
//!   Dirichlet cavity field, entanglement farming and a vibration-sensing
//!   response scan.
//! * [`cosmo`] — Bogoliubov transformations for an exactly solvable FLRW
//!   expansion, bosonic/fermionic particle and entanglement spectra, and
//!   the Rindler/Unruh pipeline.
//! * [`udw`] — perturbative Unruh-DeWitt calculations: GR-vs-LQC detector
//!   response estimators and entanglement-harvesting region maps.
//!
//! Units are natural throughout (`hbar = c = k_B = 1`); the covariance
//! convention normalises the vacuum to the identity matrix.

pub mod cosmo;
pub mod detector;
pub mod error;
pub mod gaussian;
pub mod ode;
pub mod quad;
pub mod special;
pub mod udw;

pub use error::{Error, Result};
