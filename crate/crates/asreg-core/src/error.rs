use alloc::string::String;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("path is not composable: {0}")]
    NotComposable(String),
    #[error("relation {index} is not a combination of parallel paths")]
    NonParallel { index: usize },
    #[error("relation {index} is not homogeneous")]
    NonHomogeneous { index: usize },
    #[error("degree {degree} is beyond the cap {cap}")]
    BeyondCap { degree: i64, cap: u32 },
    #[error("finite-dimensional presentation did not close: {0}")]
    NotFinite(String),
    #[error("relations do not hold in the representation: {0}")]
    RelationViolated(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("not quadratic: {0}")]
    NotQuadratic(String),
    #[error("not basic or not split: {0}")]
    NonBasic(String),
    #[error("endomorphism ring is not local: {0}")]
    NonLocal(String),
    #[error("invalid group action: {0}")]
    BadAction(String),
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("resolution is not deep enough: {0}")]
    ShallowResolution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
