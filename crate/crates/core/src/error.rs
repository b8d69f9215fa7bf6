use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("points are collinear; no circumcircle")]
    NoCircumcircle,

    #[error("no real branch: |anchor - x|^2 = {dist2} exceeds 4")]
    NoRealBranch { dist2: f64 },

    #[error("derivative undefined: input at distance 2 from anchor")]
    AtBoundary,

    #[error("derivative vanishes: output circle tangent to the source circle")]
    ZeroDerivative,

    #[error("construction failed at step {step}: {reason}")]
    ConstructionFailed { step: usize, reason: String },

    #[error("point leaves the tan-half-angle chart (angle pi)")]
    ChartGap,

    #[error("specialization is identically zero at t1={t1}, t2={t2}")]
    DegenerateSpecialization { t1: String, t2: String },

    #[error("fiber at t_x={t_x} vanishes identically (vertical component)")]
    VerticalComponent { t_x: String },

    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
