//! Subsystem-code penalty Hamiltonians.
//!
//! Build subsystem error-detecting codes (explicitly or from binary
//! A-matrices), assemble commuting penalty Hamiltonians, check the spectral
//! conditions under which a large penalty decouples detectable noise, and
//! simulate system-bath dynamics to measure and bound the residual error.

pub mod chain;
pub mod code;
pub mod conditions;
pub mod dense;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod f2;
pub mod hamiltonian;
pub mod pauli;
pub mod spectral;
pub mod subspace;

pub use code::{CodeParams, SubsystemCode};
pub use dense::{OperatorMatrix, StateVector, C64};
pub use error::{Error, Result};
pub use f2::BinaryMatrix;
pub use hamiltonian::{Hamiltonian, ScheduleGroup, Term};
pub use pauli::{Letter, PauliOperator};
pub use spectral::SpectralDecomposition;
