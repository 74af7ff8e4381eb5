use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatterError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("argument outside the domain of {0}")]
    Domain(&'static str),
    #[error("{0} is singular at the origin")]
    Singularity(&'static str),
    #[error("argument lies on the branch cut of {0}")]
    BranchCut(&'static str),
    #[error("overflow in {0}: argument beyond the stable range")]
    Overflow(&'static str),
    #[error("series did not converge within {terms} terms (tail {tail:.3e})")]
    NonConvergence { terms: usize, tail: f64 },
    #[error("denominator determinant vanished at order {ell}")]
    DegenerateDeterminant { ell: usize },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("matrix is numerically singular (residual {0:.3e})")]
    Singular(f64),
    #[error("matrix exponential produced non-finite entries at tau = {0}")]
    StepFailure(f64),
    #[error("grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, ScatterError>;
