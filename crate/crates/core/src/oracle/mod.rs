//! Dense reference simulation used for validation.

pub mod evolve;
pub mod jw;
pub mod metrics;

pub use evolve::{
    evolve_schedule, exact_distribution, lindblad_evolve, measure_distribution, unitary_dense,
    DenseGenerator, DenseSchedule, DenseState,
};
pub use jw::{dense_form, dense_operator, majorana_action, majorana_dense, number_dense};
pub use metrics::{hamming_locality, tvd, verify_sparse_lemma, LemmaCheck};
