use thiserror::Error;

/// Everything that can go wrong while building a characteristic function,
/// integrating, or evaluating a bound.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("sample is empty")]
    EmptySample,

    #[error("sample entry {index} is not a finite number")]
    NonFiniteSample { index: usize },

    #[error("cannot parse sample line {line}: {content:?}")]
    SampleParse { line: usize, content: String },

    #[error("integrand is not finite at u = {at}")]
    IntegrandDomain { at: f64 },

    #[error("quadrature did not converge within {evaluations} evaluations")]
    Convergence { evaluations: usize },

    #[error("polynomial is not non-negative (minimum estimate {min_estimate:.3e})")]
    RejectedPolynomial { min_estimate: f64 },

    #[error("constant coefficient a0 = {a0} must be positive")]
    DivisionDomain { a0: f64 },

    #[error("s = {s} exceeds {what} = {limit}")]
    AnalyticityDomain { s: f64, limit: f64, what: &'static str },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("no closed-form tail oracle for {0}")]
    UnsupportedOracle(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
