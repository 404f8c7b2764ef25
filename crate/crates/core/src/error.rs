use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown letter '{0}'")]
    UnknownLetter(char),

    #[error("rewriting system is not confluent; refusing to certify normal forms")]
    NotConfluent,

    #[error("ball exceeded its budget of {budget} elements at radius {radius_reached}")]
    BallBudget { budget: usize, radius_reached: usize },

    #[error("radius {requested} is outside the ball of radius {radius}")]
    OutOfRange { requested: f64, radius: usize },

    #[error("exactness guard violated: {0}")]
    Guard(String),

    #[error("cone signatures collide at lookahead {lookahead}: {first} and {second} agree but their successors differ; retry with a larger lookahead")]
    SignatureCollision {
        lookahead: usize,
        first: String,
        second: String,
    },

    #[error("automaton is not closed: {0}")]
    IncompleteState(String),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no m0 found up to {cap}; blocking conditions at m = {last_m}: {}", .blocking.join(", "))]
    M0Unattainable {
        cap: u64,
        last_m: u64,
        blocking: Vec<String>,
    },

    #[error("validity window violated: {}", .0.join("; "))]
    Validity(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::UnknownLetter(_) => "unknown-letter",
            Error::NotConfluent => "not-confluent",
            Error::BallBudget { .. } => "ball-budget",
            Error::OutOfRange { .. } => "out-of-range",
            Error::Guard(_) => "guard",
            Error::SignatureCollision { .. } => "signature-collision",
            Error::IncompleteState(_) => "incomplete-state",
            Error::NoConvergence { .. } => "no-convergence",
            Error::Domain(_) => "domain",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::M0Unattainable { .. } => "m0-unattainable",
            Error::Validity(_) => "validity",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
