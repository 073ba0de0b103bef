use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent {value} at position {pos} exceeds the limit 2^16")]
    ExponentOverflow { pos: usize, value: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for a constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("operation undefined on the trivial subspace")]
    TrivialSubspace,
    #[error("polynomial does not act along the given subspace")]
    NotActingAlong,
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("point is not in the domain")]
    NotInDomain,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),
    #[error("degenerate extent: {0}")]
    DegenerateExtent(String),
    #[error("zero set of the principal part is not known to be a subspace")]
    ZeroSetNotSubspace,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
