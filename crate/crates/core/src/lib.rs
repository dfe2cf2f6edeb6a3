//! Simulation of N single photons interfering in an N×N Bell multiport
//! beam splitter, with postselection on one photon per output port.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`]: complex matrices, the Bell (DFT) multiport and unitarity checks.
//! - [`permanent`]: the permanent kernel (Ryser/Gray-code plus a permutation-sum reference).
//! - [`scattering`]: input states, postselection, success probability and the
//!   Fock-space expansion used as an independent oracle.
//! - [`analysis`]: canonical W/GHZ/double-singlet states, local Pauli maps,
//!   fidelity and the general four-photon decomposition.
//! - [`sweep`]: the W-state success-probability sweep over N and its log-linear fit.

pub mod analysis;
pub mod error;
pub mod matrix;
pub mod permanent;
pub mod scattering;
pub mod sweep;

pub use num_complex::Complex64;

pub use analysis::{
    apply_local_pauli, canonical_state, decompose_general4, fidelity, CanonicalStateKind,
    DecompositionResult, PauliAxis,
};
pub use error::{Error, Result};
pub use matrix::{
    build_bell_multiport, check_unitary, reduced_matrix, ComplexMatrix, TransitionMatrix,
};
pub use permanent::{permanent_fast, permanent_naive};
pub use scattering::{
    normalize, oracle_full_expansion, postselect, success_probability, FockExpansion,
    FockOccupation, InputConfiguration, Label, LabelAssignment, PhotonState, PostselectedState,
};
pub use sweep::{fit_exponential, sweep_w_success, FitResult, SweepRecord};
