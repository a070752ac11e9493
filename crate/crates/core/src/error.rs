use thiserror::Error;

/// Every failure the library reports. Variants map one-to-one onto the
/// error kinds named in the operation contracts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("points do not span a hyperplane of the ambient flat")]
    DegenerateSpan,
    #[error("hyperplane is the ambient hyperplane (or parallel to it) and has no induced class")]
    IsAmbientHyperplane,
    #[error("degenerate segment collection: {0}")]
    DegenerateCollection(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("point is not a member of the set")]
    NotAMember,
    #[error("point set spans the whole ambient space; there is no ambient hyperplane to exclude")]
    NoAmbientHyperplane,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: String },
    #[error("contract violated: {0}")]
    ContractViolated(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("integer overflow in the fast incidence path: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache mismatch: {0}")]
    CacheMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
