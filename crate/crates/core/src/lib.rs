//! Two-level resonant absorption under shaped laser pulses.
//!
//! The crate simulates a two-level atom driven by super-Gaussian or flat-top
//! pulses and computes frequency-resolved absorption, resonance fluorescence
//! and Larmor spectra. All internal quantities are in Hartree atomic units.

pub mod cli;
pub mod dynamics;
pub mod emission;
pub mod error;
pub mod pulse;
pub mod quad;
pub mod scan;
pub mod simulation;
pub mod spectra;
pub mod transform;
pub mod units;

pub use error::{Error, Result};
