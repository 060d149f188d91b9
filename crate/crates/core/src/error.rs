use thiserror::Error;

/// Failures raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("curvature requested at pole sample {0} of an untagged profile")]
    PoleSingularity(usize),
    #[error("normal graph reverses the parameter near sample {0}")]
    SelfIntersection(usize),
    #[error("quadrature did not converge: {0}")]
    QuadratureNonconvergence(String),
    #[error("no balanced center in bracket")]
    NoRoot,
    #[error("degenerate root: |d sum / ds| = {0:e}")]
    DegenerateRoot(f64),
    #[error("neck fit failed: {0}")]
    FitFailure(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("assembled profile is not embedded near sample {0}")]
    EmbeddingFailure(usize),
    #[error("geometry too tight: {0}")]
    GeometryTooTight(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("eigen solve failed: {0}")]
    EigenSolveFailure(String),
    #[error("Newton iteration diverged: {0}")]
    NewtonDivergence(String),
    #[error("iteration limit reached: {0}")]
    MaxIterations(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
