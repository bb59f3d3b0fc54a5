//! Quadrature-based multi-shell q-space sampling and spherical polar Fourier
//! reconstruction for diffusion MRI.
//!
//! The crate is organised in layers:
//!
//! * [`math`] — Laguerre polynomials and roots, the radial Gauss-Laguerre rule,
//!   real spherical harmonics, spherical Bessel functions.
//! * [`sampling`] — the quadrature scheme (shells at Laguerre nodes, ring grids
//!   per shell) and an electrostatic-repulsion baseline.
//! * [`transforms`] — spherical harmonic transforms, the separable SPF forward
//!   transform and synthesis, and a regularized least-squares fit.
//! * [`models`] — Gaussian mixture signals, rotations and analytic ODFs.
//! * [`odf`] — a linear SPF→ODF kernel, icosphere peak search, angular error.
//! * [`harness`] — experiment drivers, reports and the command-line front end.

pub mod error;
pub mod harness;
pub mod math;
pub mod models;
pub mod odf;
pub mod sampling;
pub mod transforms;

pub use error::{Error, Result};
