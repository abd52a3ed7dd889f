use thiserror::Error;

/// Errors raised across the pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown case id `{0}`")]
    UnknownCase(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("case {0} unsupported: {1}")]
    Unsupported(String, String),
    #[error("generators do not close: pair ({0},{1}) leaves the span (residual {2:.3e})")]
    NonClosure(usize, usize, f64),
    #[error("rank-deficient chart jacobian at {0:?}")]
    RankDeficient([f64; 3]),
    #[error("metric signature violated at {0:?}")]
    Signature([f64; 3]),
    #[error("branch point: {0}")]
    BranchPoint(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("index parity violated: dim {0}, ind {1}")]
    Parity(usize, usize),
    #[error("step size underflow at v = {0}")]
    StepUnderflow(f64),
    #[error("coefficient singularity at v = {0}")]
    Singular(f64),
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
