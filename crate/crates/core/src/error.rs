use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the geometry, Cauchy, pole and winding routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain needs at least one boundary curve")]
    NoCurves,
    #[error("curve {curve} has a vanishing derivative at node {node}")]
    DegenerateCurve { curve: usize, node: usize },
    #[error("node count {0} is not a power of two >= 8")]
    BadNodeCount(usize),
    #[error("curves {first} and {second} intersect or nearly touch (distance {distance:.3e})")]
    CurvesIntersect {
        first: usize,
        second: usize,
        distance: f64,
    },
    #[error("curve nesting is ambiguous: {0}")]
    AmbiguousNesting(String),
    #[error("sample layout does not match the domain grid: {0}")]
    SampleMismatch(String),
    #[error("non-finite sample on curve {curve} at node {node}")]
    NonFiniteSample { curve: usize, node: usize },
    #[error("point {0} lies within the boundary band")]
    ProbeTooClose(Complex64),
    #[error("point {0} is not in the domain")]
    NotInterior(Complex64),
    #[error("point {0} is a pole of the extension")]
    EvalAtPole(Complex64),
    #[error("no probe points fit in component {0}")]
    NoProbes(String),
    #[error("need {needed} moments, have {available}")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("polynomial has no coefficient above the drop threshold")]
    ZeroPolynomial,
    #[error("loop function comes within {0:.3e} of zero")]
    NearZero(f64),
    #[error("winding number unresolved on curve {curve}: argument step {step:.3} rad at the sampling cap")]
    Unresolved { curve: usize, step: f64 },
    #[error("every probe trial was inadmissible")]
    AllTrialsInadmissible,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
