use thiserror::Error;

/// One violated admissibility rule found while validating parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("inadmissible parameters: {}", join(.0))]
    InvalidParams(Vec<Violation>),

    #[error("function is not entire (a* = {a_star}); series only converges on a disc")]
    NotEntire { a_star: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{what} did not converge (best estimate {best_estimate:e}, error estimate {error_estimate:e})")]
    Convergence {
        what: &'static str,
        best_estimate: f64,
        error_estimate: f64,
    },

    #[error("{what}: precision lost to cancellation (indicator {cancellation:e})")]
    Precision { what: &'static str, cancellation: f64 },

    #[error("mixing density is negative at tau = {tau} (value {value:e})")]
    NegativeDensity { tau: f64, value: f64 },

    #[error("invalid state: {0}")]
    State(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
