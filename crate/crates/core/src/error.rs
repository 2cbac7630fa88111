use thiserror::Error;

/// Errors surfaced by the tessellation engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("d = {0} is not square-free")]
    NotSquareFree(i64),
    #[error("d = {0} is not negative")]
    NotNegative(i64),
    #[error("the zero ideal has no Hermite basis")]
    ZeroIdeal,
    #[error("the zero vector has no projective class")]
    ZeroVector,
    #[error("matrix is not unimodular over the ring of integers")]
    NotUnimodular,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("candidate pair imposes no new linear condition")]
    DegenerateCandidate,
    #[error("initial form search exhausted (norm shell cap {0})")]
    SearchExhausted(i64),
    #[error("facet does not belong to this perfect form")]
    NotAFacet,
    #[error("neighbor step failed to terminate within the iteration cap")]
    NonterminatingStep,
    #[error("cone generators span a space of rank < 4")]
    DegenerateCone,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cache entry failed its content-hash check: {0}")]
    CacheCorrupt(String),
}

pub type Result<T> = std::result::Result<T, Error>;
