//! Finite-mode Fock-space oracle: explicit fermion operators, the
//! Hamiltonian built from the field, charges and checks against the
//! closed-form results.

pub mod amplitudes;
pub mod bogoliubov;
pub mod charges;
pub mod checks;
pub mod hamiltonian;
pub mod modes;
pub mod sparse;
pub mod suite;

pub use amplitudes::{amplitudes_from_angles, AmplitudePair, AmplitudeProfile};
pub use bogoliubov::{bogoliubov, BogoliubovTransform};
pub use charges::{build_charges, ChargeSet};
pub use checks::*;
pub use hamiltonian::{build_hamiltonian, discrete_dispersion, HamiltonianParts};
pub use modes::{FockSpace, ModeSet, Species};
pub use sparse::SparseMatrix;
pub use suite::{pair_oracle, run_oracle, violating_pair, OracleConfig, OracleReport, PairOracle};

#[derive(Debug, thiserror::Error)]
pub enum FockError {
    #[error("invalid mode set: {0}")]
    InvalidModes(String),
    #[error("{orbitals} orbitals exceed the budget of {max}")]
    Budget { orbitals: usize, max: usize },
}
