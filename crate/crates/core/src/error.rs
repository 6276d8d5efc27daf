use thiserror::Error;

/// Errors surfaced by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group order cap {cap} exceeded during closure")]
    GroupCapExceeded { cap: usize },

    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("signature incompatible with group order: {0}")]
    SignatureIncompatible(String),

    #[error("curve genus {0} is below 2, the quotient datum is not of general type")]
    GenusBelowTwo(u64),

    #[error("parity violation: {0}")]
    ParityViolation(String),

    #[error("invalid generating vector: {0}")]
    InvalidGeneratingVector(String),

    #[error("surface invariant violated: {0}")]
    InvariantViolation(String),

    #[error("coset action reaches only {reached} of {total} cosets; the entries do not generate")]
    CosetActionNotTransitive { reached: usize, total: usize },

    #[error("first homology has nonzero free rank {0}; the input pair is not a valid surface datum")]
    NonzeroFreeRank(usize),

    #[error("inconsistent negative-curve data: {0}")]
    InvalidNegativeCurves(String),

    #[error("inconsistent surface descriptor: {0}")]
    InconsistentDescriptor(String),

    #[error("group data file {path}: {reason}")]
    GroupData { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
