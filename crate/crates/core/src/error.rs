use thiserror::Error;

/// Every failure this crate reports.
///
/// The variants are grouped the way the CLI maps them to exit codes:
/// input/parameter problems, infeasibility, resource limits, and
/// internal invariant violations (which must never fire on valid input).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("x = {x} lies outside the certified interval [{lo}, {hi}]")]
    OutOfInterval { x: String, lo: String, hi: String },

    #[error("infeasible split for {list}: inequality `{inequality}` not met ({detail})")]
    Infeasible {
        list: String,
        inequality: String,
        detail: String,
    },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("map cannot be evaluated exactly: {0}")]
    EvalNotExact(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("round {round} could not restore the bound: {detail}")]
    BudgetViolation { round: usize, detail: String },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
