//! Cyclic variational quantum eigensolver on an exact statevector simulator.
//!
//! The crate is organised bottom-up:
//!
//! * [`fcidump`] and [`hamiltonian`] turn molecular integrals into a qubit
//!   Hamiltonian through the Jordan–Wigner mapping (built on [`pauli`]).
//! * [`excitation`] enumerates the UCCSD excitations relative to the
//!   Hartree–Fock determinant.
//! * [`statevector`] is the simulation engine: reference preparation,
//!   excitation exponentials, expectation values, adjoint gradients and
//!   computational-basis sampling.
//! * [`optimizer`] holds gradient descent and Cyclic Adamax.
//! * [`driver`] runs the expand-and-optimise cycle.
//! * [`oracle`] computes exact (FCI) and Hartree–Fock reference energies.
//!
//! Qubit `2p` carries spatial orbital `p` with α spin and qubit `2p + 1` the
//! β partner, so the Hartree–Fock determinant is the lowest block of qubits.

pub mod driver;
pub mod error;
pub mod excitation;
pub mod fcidump;
pub mod hamiltonian;
pub mod oracle;
pub mod optimizer;
mod par;
pub mod pauli;
pub mod sector;
pub mod statevector;

pub use driver::{run_cvqe, CycleConfig, RunTrajectory, SelectionMode};
pub use error::{Error, Result};
pub use excitation::{enumerate_excitations, hf_determinant, Excitation, ExcitationList};
pub use fcidump::{parse_fcidump, OrbitalIntegrals};
pub use hamiltonian::{build_qubit_hamiltonian, QubitHamiltonian};
pub use oracle::{fci_ground_energy, hf_energy, SectorBasis};
pub use optimizer::{AdamaxState, RestartPolicy};
pub use pauli::{PauliString, PauliSum};
pub use statevector::{Determinant, ReferenceSet, StateVector};

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;
