//! Domain types: quadratic Hamiltonians, quadratic-linear Lindblad operators, Fock
//! configurations, and classification of Lindblad sets.

pub mod config;
pub mod fock;
pub mod hamiltonian;
pub mod lindblad;
pub mod operator;
pub mod reference;
pub mod schedule;

pub use config::ExperimentConfig;
pub use fock::{Distribution, FockConfiguration};
pub use hamiltonian::{validate_hamiltonian, QuadraticHamiltonian, ValidationReport};
pub use lindblad::{
    classify_set, decompose, Channel, ClassHint, ClassTag, Decomposition, LindbladSet,
    LindbladTerm, Model, Slot,
};
pub use operator::{
    annihilate, create, fock_bilinear, fock_operator_as_majorana, hopping, onsite, FockKind,
    LindbladOperator, QuadraticForm, UnitaryJump,
};
pub use schedule::{Schedule, Segment};
