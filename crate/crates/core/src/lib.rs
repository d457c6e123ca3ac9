//! Exact-diagonalization toolkit for maximally entangled resonating-valence-bond
//! states of spin-1/2 systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`spin`]: z-basis states, spin operators, correlations and partial traces.
//! * [`valence_bond`]: singlet dimer coverings and the non-crossing (Rumer) basis.
//! * [`entanglement`]: two-site entropies, i-concurrence, Werner fits and PPT tests.
//! * [`irhm`]: the infinite-range Heisenberg model, its spectrum, the explicit
//!   homogeneous states and a numerical homogenizer.
//! * [`phonon`]: phonon-dressed effective Hamiltonians, the Lang-Firsov check and
//!   the hard-core-boson operator identities behind third-order perturbation theory.
//! * [`dynamics`]: exact collective dephasing and decoherence-free subspaces.
//! * [`report`]: reproduction tables and the aggregated verification suite.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod irhm;
pub mod linalg;
pub mod phonon;
pub mod report;
pub mod spin;
pub mod valence_bond;

pub use error::{Error, Result};
pub use linalg::C64;
pub use spin::PureState;
