//! Brownian-motion spectra in linear viscoelastic media.
//!
//! The crate models the thermal motion of a microparticle suspended in a
//! linear viscoelastic medium. Each medium is represented as a mechanical
//! network of springs, dashpots, springpots, and an inerter; the network's
//! complex dynamic modulus G(ω) determines the velocity power spectral
//! density through the fluidity φ(ω) = iω/G(ω). Closed-form spectra,
//! autocorrelation and mean-square-displacement curves, a generalized
//! Langevin trajectory simulator with fluctuation–dissipation-consistent
//! noise, and the estimators that close the loop between the two all live
//! here, behind the `rheospec` CLI.

pub mod cli;
pub mod config;
pub mod curves;
pub mod estimators;
pub(crate) mod quad;
pub mod rheology;
pub mod simkit;
pub mod specfun;
pub mod spectra;
pub mod trajfile;
pub mod verify;

pub use num_complex::Complex64;
