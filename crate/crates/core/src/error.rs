use thiserror::Error;

/// Errors raised by the numerical core. Variant names double as the
/// module-level error names reported by the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("SingularPointError: kernel evaluated at the origin")]
    SingularPoint,
    #[error("CuspError: corner {index} has interior angle {theta} (cusp)")]
    Cusp { index: usize, theta: f64 },
    #[error("OpenCurveError: edge {index} ends {gap:e} away from the start of the next edge")]
    OpenCurve { index: usize, gap: f64 },
    #[error("SelfIntersectionError: edges {first} and {second} cross")]
    SelfIntersection { first: usize, second: usize },
    #[error("InvalidRefinement: {0}")]
    InvalidRefinement(String),
    #[error("EmptyCorners: the curve has no corners")]
    EmptyCorners,
    #[error("GridTooCoarse: {nodes} nodes, at least {min} required")]
    GridTooCoarse { nodes: usize, min: usize },
    #[error("SpectralParameterError: z = {z} is outside the gap (-{mass}, {mass})")]
    SpectralParameter { z: f64, mass: f64 },
    #[error("CriticalCouplingError: |epsilon| = |mu| = {0}")]
    CriticalCoupling(f64),
    #[error("PointOnCurveError: evaluation point ({x}, {y}) lies on the curve")]
    PointOnCurve { x: f64, y: f64 },
    #[error("ConvergenceError: {0}")]
    Convergence(String),
    #[error("IllConditioned: {0}")]
    IllConditioned(String),
    #[error("DimensionMismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("IoError: {0}")]
    Io(String),
}

impl Error {
    /// Short name of the variant, e.g. `"CuspError"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::SingularPoint => "SingularPointError",
            Error::Cusp { .. } => "CuspError",
            Error::OpenCurve { .. } => "OpenCurveError",
            Error::SelfIntersection { .. } => "SelfIntersectionError",
            Error::InvalidRefinement(_) => "InvalidRefinement",
            Error::EmptyCorners => "EmptyCorners",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::SpectralParameter { .. } => "SpectralParameterError",
            Error::CriticalCoupling(_) => "CriticalCouplingError",
            Error::PointOnCurve { .. } => "PointOnCurveError",
            Error::Convergence(_) => "ConvergenceError",
            Error::IllConditioned(_) => "IllConditioned",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Io(_) => "IoError",
        }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Convergence(_) | Error::IllConditioned(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
