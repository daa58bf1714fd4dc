//! The image model of the interpolated Hamiltonian: one transverse-field
//! Ising ring per row and shade, with parity sectors and sector-dependent
//! boundary fluxes derived exactly from the stabilizer algebra.

mod dense;
mod ensemble;
mod ff;

pub use dense::{chain_dense_spectrum, ChainSpec, Parity, CHAIN_DENSE_CAP};
pub use ensemble::{
    assemble_k_lowest, map_verify, ChainEnsemble, GapPoint, RuleView, TwistView,
    VerificationReport,
};
pub use ff::{chain_ff_spectrum, chain_gap_curve, ff_mode_energies};
