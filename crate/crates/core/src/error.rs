use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel singularity: evaluation point coincides with the source point")]
    KernelSingularity,
    #[error("image point undefined for a source at the origin; use the limit form")]
    ImagePointUndefined,
    #[error("operation requires dimension {expected}, got {got}")]
    UnsupportedDimension { expected: usize, got: usize },
    #[error("point {0:?} lies outside the closed unit ball")]
    OutsideDomain(Vec<f64>),
    #[error("puncture must lie strictly inside the domain, got {0:?}")]
    PunctureNotInterior(Vec<f64>),
    #[error("puncture sphere of radius {radius} leaves the domain (distance to boundary {distance})")]
    SphereLeavesDomain { radius: f64, distance: f64 },
    #[error("gamma limit does not stabilize (last increment {increment:e})")]
    GammaNotStable { increment: f64 },
    #[error("radius schedule must be strictly decreasing and positive")]
    BadSchedule,
    #[error("quadrature order {0} too small")]
    QuadratureOrder(usize),
    #[error("decomposition required: boundary trace lacks regular-part values")]
    DecompositionRequired,
    #[error("zero table exhausted: j_{l} zero #{n} is outside the supported range")]
    ZeroTableExhausted { l: usize, n: usize },
    #[error("invalid basis index {0}")]
    BasisIndex(usize),
    #[error("evaluation at pole: lambda is within 1e-10 of mu_{index} = {mu}")]
    EvaluationAtPole { index: usize, mu: f64 },
    #[error("lambda is a perturbed eigenvalue (|Delta| = {0:e})")]
    PerturbedEigenvalue(f64),
    #[error("intermediate operator B_{level} is not invertible at lambda")]
    ChainNotInvertible { level: usize },
    #[error("root {root} collides with unperturbed eigenvalue {pole}; refine M")]
    RootPoleCollision { root: f64, pole: f64 },
    #[error("quadrature did not converge: refinement levels differ by {0:e}")]
    QuadratureNotConverged(f64),
    #[error("singular-point evaluation refused: x coincides with the puncture")]
    SingularPointEvaluation,
    #[error("field outside the maximal domain: {0}")]
    FieldOutsideDomain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
