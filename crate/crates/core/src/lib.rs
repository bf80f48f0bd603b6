//! Hybrid spin–magnon–photon system: a single NV spin coupled to a coplanar
//! waveguide photon through the Kittel mode of a YIG microsphere.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] – physical constants, control-field to frequency maps and
//!   thermal occupations.
//! * [`couplings`] – geometry-derived couplings `g`, `λ`, the quantized dipole
//!   field of the Kittel mode, and the magnon-eliminated effective parameters.
//! * [`hilbert`] – dense operators on truncated composite Hilbert spaces.
//! * [`lindblad`] – Hamiltonians, master-equation generator, adaptive
//!   integrator and the full-vs-effective comparison.
//! * [`walker`] – magnetostatic Walker-mode characteristic equation and the
//!   Kittel-mode consistency check.
//!
//! Internally every frequency and rate is angular (rad/s). Hamiltonians are
//! stored as `H/ħ`, so they carry units of rad/s as well.

pub mod couplings;
pub mod error;
pub mod hilbert;
pub mod lindblad;
pub mod model;
pub mod walker;

pub use error::{Error, Result};

/// `2π`, used at every Hz <-> rad/s boundary.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Converts an ordinary frequency (Hz) to an angular frequency (rad/s).
#[inline]
pub fn hz_to_angular(nu: f64) -> f64 {
    TWO_PI * nu
}

/// Converts an angular frequency (rad/s) to an ordinary frequency (Hz).
#[inline]
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / TWO_PI
}
