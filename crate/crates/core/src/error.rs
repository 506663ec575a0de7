use thiserror::Error;

/// Errors raised by the exact kernels and pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric")]
    Asymmetric,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent {0} exceeds the per-variable bound of 64")]
    ExponentOverflow(u64),
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("Hermite form of a constant polynomial is empty")]
    EmptyForm,
    #[error("polynomial is not real-rooted")]
    NotRealRooted,
    #[error("vectors do not span the ambient space")]
    Span,
    #[error("degree violation: {0}")]
    Degree(String),
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("division is not exact")]
    InexactDivision,
    #[error("no Gram matrix represents the polynomial in this monomial basis")]
    NoGram,
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
