use thiserror::Error;

/// Library-wide error type. Every variant maps to a distinct CLI diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("construction error: {0}")]
    Construction(String),
    #[error("size guard: {0}")]
    Size(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivideByZero,
    #[error("operation requires characteristic {expected}, field has characteristic {found}")]
    Characteristic { expected: u32, found: u32 },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("map does not descend to the quotient: {0}")]
    NotWellDefined(String),
    #[error("filtration admits no compatible o-good grading")]
    NotOGood,
    #[error("form is not in eta of the filtration: {0}")]
    NotInEta(String),
    #[error("form is not graded in degree -2 for this grading")]
    NotGraded,
    #[error("form is not nilpotent")]
    NotNilpotent,
    #[error("zero form has no nonzero chain data")]
    ZeroInput,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
