//! Exact and Monte Carlo statistics of spin-1/2 beam ensembles.
//!
//! The library constructs the density operators produced by different
//! preparation procedures for beams of N spin-1/2 particles, computes
//! collective-spin statistics on them, decides when two preparations are
//! operationally distinguishable, and cross-validates every exact result
//! with an independent measurement sampler.

pub mod claims;
pub mod ensembles;
pub mod error;
pub mod fermion;
pub mod qubit;
pub mod sampling;
pub mod statistics;
pub mod tensor;

pub use error::{Result, SimError};
pub use num_complex::Complex64;

/// Library-wide absolute tolerance for invariant checks.
pub const TOL: f64 = 1e-12;

/// Crate version, reported by the CLI output envelope.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
