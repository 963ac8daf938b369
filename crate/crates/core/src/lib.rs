//! Entanglement and quantum state geometry of the all-range Ising spin-1/2
//! system.
//!
//! The Hamiltonian `(J/4)(Σσᶻ)² + (h/2)Σσˣ` commutes with every permutation of
//! the spins, so states that start as symmetric products stay in the
//! `(N+1)`-dimensional Dicke sector. Everything here works in that sector,
//! with a `2^N` brute-force representation kept around as an oracle for
//! small `N`.
//!
//! Modules:
//! - [`spin_state`]: configuration, Dicke-sector and full-space states.
//! - [`evolution`]: one-axis twisting and transverse-field propagation,
//!   periodicity detection.
//! - [`entanglement`]: geometric measure of entanglement of one spin.
//! - [`geometry`]: Fubini-Study metric and scalar curvature at `h = 0`.
//! - [`field_geometry`]: metric and topology with a transverse field.
//! - [`verify`]: the oracle/invariant suite behind `ising-geometry verify`.

pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod field_geometry;
pub mod geometry;
pub mod spin_state;
pub mod verify;

pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;
