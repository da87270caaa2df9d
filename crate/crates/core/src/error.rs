use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("family parameter mismatch: {left} vs {right}")]
    ParameterMismatch { left: i64, right: i64 },

    #[error("element has norm {norm}, not a unit")]
    NotAUnit { norm: BigInt },

    #[error("a = 0 gives the degenerate form (X - Y)^3; pass the degenerate flag to evaluate it")]
    DegenerateForm,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("interval {0} contains zero; logarithm undefined")]
    LogDomain(String),

    #[error("division by an interval containing zero")]
    DivisionByZero,

    #[error("precision cap of {cap} bits reached while {what}")]
    PrecisionExhausted { cap: u32, what: String },

    #[error("F_(n,a)(x, y) = 0; the gamma triple cannot be normalised")]
    ZeroValue,

    #[error("no (A, B) within the neighbour radius satisfies the conjugate bounds (best candidate {best})")]
    DecompositionNotNormalized { best: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
