use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlsError {
    #[error("matrix is not antisymmetric (max deviation {0:e})")]
    NonAntisymmetric(f64),
    #[error("schedule does not cover [{0}, {1}]")]
    ScheduleGap(f64, f64),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mode index {index} out of range for L = {modes}")]
    IndexOutOfRange { index: usize, modes: usize },
    #[error("class hint {hint} contradicts detected structure: {detail}")]
    AmbiguousClass { hint: String, detail: String },
    #[error("Lindblad set is not efficiently simulable ({0})")]
    UnsupportedClass(String),
    #[error("too many Lindblad operators: {count} > L(L+1) = {limit}")]
    TooManyOperators { count: usize, limit: usize },
    #[error("jump probability {0} per step is too large (must stay below 0.5)")]
    StepTooLarge(f64),
    #[error("no timestep reaches target epsilon {0}")]
    InfeasibleTarget(f64),
    #[error("dimension too large: {0}")]
    DimensionTooLarge(String),
    #[error("integrator failed to meet tolerance: {0}")]
    ToleranceNotMet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FlsError>;
