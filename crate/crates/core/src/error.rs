use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Grassmann degree bounds differ: {0} vs {1}")]
    DegreeBoundMismatch(u32, u32),
    #[error("element has zero augmentation and is not invertible")]
    NotInvertible,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operation requires a homogeneous input")]
    InhomogeneousInput,
    #[error("matrix entry ({row}, {col}) violates the {expected} parity pattern")]
    ParityViolation {
        row: usize,
        col: usize,
        expected: &'static str,
    },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("1 - X is singular; Cayley transform undefined")]
    SingularCayley,
    #[error("matrix is singular")]
    Singular,
    #[error("seed vectors are not normalized: {0}")]
    NotNormalized(String),
    #[error("degree-zero part admits no rational orthosymplectic completion")]
    IrrationalCompletion,
    #[error("Gram matrix of the basis is not the standard form")]
    NotOrthosymplectic,
    #[error("loop parameter {got} does not match m - 2n = {expected}")]
    DeltaMismatch { expected: String, got: String },
    #[error("problem size {size} exceeds the configured bound {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("no super Pfaffian generator found (invariant slice dimension {0})")]
    NoPfaffianFound(usize),
    #[error("evaluation point has the wrong parity in column {0}")]
    NotEvenPoint(usize),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("solver output failed its post-check: {0}")]
    PostCheck(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
