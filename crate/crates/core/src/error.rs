use thiserror::Error;

/// Errors produced while building models or evaluating orderings.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid tabulated baseline: {0}")]
    InvalidTable(String),

    #[error("{what} is only defined above the support start {support}, got t = {t}")]
    Domain {
        what: &'static str,
        t: f64,
        support: f64,
    },

    #[error("undefined at x = {x}: denominator {value:e} is at or below the floor {floor:e}")]
    UndefinedPoint { x: f64, value: f64, floor: f64 },

    #[error("mixing weights sum to {sum}, expected 1 (n1*r1 + n2*r2 = 1 for outlier mixtures); use the autonormalize policy to rescale")]
    WeightSum { sum: f64 },

    #[error("weights and components differ in length ({weights} vs {components})")]
    LengthMismatch { weights: usize, components: usize },

    #[error("vector lengths differ ({left} vs {right})")]
    VectorLength { left: usize, right: usize },

    #[error("empty mixture")]
    EmptyMixture,

    #[error("invalid sample at index {index}: {value}")]
    InvalidSample { index: usize, value: f64 },

    #[error("need at least 3 samples, got {0}")]
    TooFewSamples(usize),

    #[error("only {usable} usable grid points remain after excluding denominators below the floor")]
    InsufficientDomain { usable: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("quadrature did not converge; achieved estimate {estimate}")]
    Quadrature { estimate: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("audit inputs disagree: {0}")]
    Audit(String),

    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("scenario validation error: {0}")]
    Validation(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
