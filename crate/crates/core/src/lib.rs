//! Exact tools for a pair of stabilizer models sharing one hexagonal torus:
//! a color code (X/Z plaquette pair per hexagon) and a toric code built from
//! the chess-pattern trapezoid split of the same hexagons.
//!
//! The crate provides
//!
//! - bit-vector Pauli operators with exact phase tracking ([`pauli`]),
//! - GF(2) stabilizer-group queries: rank, membership with sign, stabilizer
//!   expectations, and sign-sector constraint derivation ([`stabilizer`]),
//! - lattice construction with trapezoid shading, row chains and loop
//!   operators ([`lattice`]),
//! - the model Hamiltonians and their interpolation ([`models`]),
//! - matrix-free exact diagonalization with degeneracy-resolved low spectra
//!   ([`spectra`]),
//! - the transverse-field Ising chain ensemble that reproduces the 2D
//!   interpolated spectrum, including sector parities and boundary fluxes
//!   ([`chains`]),
//! - Wilson-loop trial-state combinatorics and ED response curves
//!   ([`wilson`]).
//!
//! Everything is deterministic for fixed seeds; query objects are immutable
//! after construction and safe to share across threads.

pub mod bits;
pub mod chains;
pub mod error;
pub mod lattice;
pub mod models;
pub mod par;
pub mod pauli;
pub mod report;
pub mod spectra;
pub mod stabilizer;
pub mod wilson;

pub use error::Error;


pub use pauli::PauliString;
pub use stabilizer::StabilizerGroup;
