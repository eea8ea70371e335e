use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Exact-integer and floating matrices mixed without an explicit conversion.
    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    /// Row/column/slice index outside the valid range.
    #[error("bad index: {0}")]
    BadIndex(String),

    /// Incompatible matrix or tensor shapes.
    #[error("bad shape: {0}")]
    BadShape(String),

    /// A Hurwitz-Radon family axiom fails on an input family.
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    /// Requested object provably does not exist (e.g. p > rho(n)).
    #[error("not constructible: {0}")]
    NotConstructible(String),

    /// Size does not satisfy the congruence required by a construction case.
    #[error("bad congruence: {0}")]
    BadCongruence(String),

    /// Input lies outside the generic domain of a canonicalization or
    /// the retries allotted to escape a measure-zero boundary ran out.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Operation not available for these parameters (e.g. grid certification
    /// with too many slices).
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
