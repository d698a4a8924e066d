use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph needs at least two edges")]
    TooFewEdges,
    #[error("{what} exceeds budget ({size} > {limit})")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("scan over {copies} copies exceeds the configured budget of {limit}")]
    ScanBudgetExceeded { copies: u128, limit: u128 },
    #[error("pattern has {pattern} vertices but only {n} are available")]
    PatternTooLarge { pattern: usize, n: usize },
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("q must lie strictly between 0 and 1 (got {0})")]
    DegenerateQ(f64),
    #[error("second moment must be at least 1 (got {0})")]
    InvalidMoment(f64),
    #[error("alpha {alpha} outside [0, 1/mu) for mu = {mu}")]
    AlphaOutOfRange { alpha: f64, mu: f64 },
    #[error("sigma is required when alpha = 1")]
    MissingSigma,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn budget(what: &'static str, size: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::BudgetExceeded {
            what,
            size: size.into(),
            limit: limit.into(),
        }
    }

    /// True for every variant that signals an exceeded enumeration budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::ScanBudgetExceeded { .. }
        )
    }
}
