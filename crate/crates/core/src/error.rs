use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative argument {0} where a non-negative value is required")]
    NegativeArgument(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed double cone: {0}")]
    MalformedDoubleCone(String),
    #[error("Laurent polynomial evaluated at zero")]
    ZeroArgument,
    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),
    #[error("matrix is not antisymmetric (deviation {0:e})")]
    NotAntisymmetric(f64),
    #[error("argument within {distance:e} of a pole")]
    PoleProximity { distance: f64 },
    #[error("boundary-value extrapolation did not converge (last difference {0:e})")]
    NonconvergentExtrapolation(f64),
    #[error("integrand at the quadrature boundary is {ratio:e} of its peak")]
    DivergentTail { ratio: f64 },
    #[error("power iteration did not converge after {0} iterations")]
    PowerIterationNonconvergence(usize),
    #[error("geometry violation: {0}")]
    GeometryViolation(String),
    #[error("no candidate convention passes the locality battery:\n{0}")]
    NoPassingConvention(String),
    #[error("more than one candidate convention passes the locality battery:\n{0}")]
    MultiplePassing(String),
    #[error("empty test battery")]
    EmptyBattery,
    #[error("operator shifts particle number by up to {needed}, but it was built with cap {have}")]
    InsufficientCap { needed: usize, have: usize },
    #[error("operators live on different Fock spaces")]
    SpaceMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
