use thiserror::Error;

use crate::scalar::FieldSpec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid labelling: {0}")]
    InvalidLabelling(String),

    #[error("pair is not transverse: balls {0} and {1} share an edge")]
    NonTransverse(usize, usize),

    #[error("operation requires n >= d (n = {n}, d = {d})")]
    RequiresNAtLeastD { n: usize, d: usize },

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("budget exceeded: {what} = {requested} > {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("operator is not equivariant: {0}")]
    NonEquivariant(String),

    #[error("odd operator is nonzero at non-transverse pair {0}")]
    NonZeroAtNonTransverse(String),

    #[error("theta is not compatible with phi: {0}")]
    IncompatibleTheta(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }
}
