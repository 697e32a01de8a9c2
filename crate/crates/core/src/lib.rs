//! Inhomogeneous XX spin chains in the free-fermion picture.
//!
//! The crate works entirely with the one-excitation hopping matrix of a chain
//! and its spectral data. On top of that it provides
//!
//! * perfect-state-transfer checks and the inverse spectral construction of
//!   mirror-symmetric chains ([`pst`]),
//! * steady-state rates, occupations and heat currents for a chain coupled to
//!   two thermal baths at its ends ([`transport`]),
//! * ground-state correlation matrices, entanglement entropy, the
//!   entanglement Hamiltonian and the commuting tridiagonal Heun operator
//!   ([`entanglement`]),
//! * fermionic logarithmic negativity between disjoint regions
//!   ([`negativity`]).
//!
//! The `xxchain` binary exposes the same functionality on the command line;
//! see [`cli`].

pub mod chain;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod fit;
pub mod negativity;
pub mod pst;
pub mod reference;
pub mod transport;
pub mod tridiagonal;

pub use chain::{build_chain, diagonalize, Chain, ChainSpec, SpectralData};
pub use error::{Error, Result};
