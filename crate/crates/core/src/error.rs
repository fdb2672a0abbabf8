use crate::geometry::Interval;

/// Errors produced anywhere in the lab.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scale out of representable range for value {0}")]
    ScaleOutOfRange(f64),

    #[error("weight |z|^{gamma} is not locally integrable against dA_{alpha} near the origin")]
    NotIntegrable { gamma: f64, alpha: f64 },

    #[error("quadrature did not converge: value {value}, refinement difference {error}")]
    NonConvergence { value: f64, error: f64 },

    #[error("box family is empty")]
    EmptyFamily,

    #[error("weights live on different domains: {0}")]
    DomainMismatch(String),

    #[error("box over {interval:?} does not meet the weight's domain")]
    EmptyBox { interval: Interval },

    #[error("at interval [{}, {}): {source}", interval.left, interval.right())]
    AtInterval {
        interval: Interval,
        #[source]
        source: Box<Error>,
    },

    #[error("at delta = {delta}: {source}")]
    AtDelta {
        delta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("series term {k} failed to decay (norm {norm} > previous {previous}); the divisor is below the operator quotient")]
    NonDecay { k: usize, norm: f64, previous: f64 },

    #[error("radial window too small: truncated tail fraction {tail_fraction} exceeds 1%")]
    WindowTooSmall { tail_fraction: f64 },

    #[error("bisection failed to bracket the threshold in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn at_interval(self, interval: Interval) -> Self {
        Error::AtInterval {
            interval,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
