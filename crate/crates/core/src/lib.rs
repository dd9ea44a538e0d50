//! Finite-frequency Neumann-Poincare spectra for the 3D elastic (Lame) system on
//! spheres, with polariton-resonance and CALR (cloaking by anomalous localized
//! resonance) design tools for core-shell metamaterial structures.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`] - complex-argument spherical Bessel/Hankel functions in
//!   overflow-safe scaled arithmetic, plus the accented/remainder variants that
//!   appear in the transmission formulas.
//! * [`harmonics`] - scalar and vector spherical harmonics, sphere quadrature,
//!   and the coefficient-vector integral identities.
//! * [`layer_coeffs`] - elastodynamic single-layer potential actions on the
//!   T/I/N vector harmonics, on-surface and traction coefficient tables, and a
//!   direct Kupradze-kernel quadrature oracle.
//! * [`np_spectrum`] - the complete N-P eigensystem per mode, with the
//!   degenerate branch and a quasi-static probe.
//! * [`resonance`] - core-free transmission solving, the resonance quantity,
//!   dissipation energy and shell-modulus tuning.
//! * [`calr`] - the 4x4 core-shell transmission system, denominator tuning,
//!   point-source spectra, energies, field evaluation and the critical radius.
//! * [`cli`] - config-driven runner behind the `elasto-np` binary.

pub mod calr;
pub mod cli;
pub mod error;
pub mod harmonics;
pub mod layer_coeffs;
pub mod linsys;
pub mod np_spectrum;
pub mod resonance;
pub mod specfun;

pub use error::Error;

/// Maximum supported spherical-harmonic / Bessel order.
pub const N_MAX: usize = 256;
