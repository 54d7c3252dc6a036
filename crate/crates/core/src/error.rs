use thiserror::Error;

/// Errors raised while building distributions or running the measures on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative probability mass {value} at entry {index}")]
    NegativeMass { index: usize, value: f64 },
    #[error("probability masses sum to {total}, expected 1")]
    NotNormalized { total: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("conditioning value u={index} has mass {mass}")]
    ZeroConditioningMass { index: usize, mass: f64 },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("operation requires binary alphabets with positive marginals")]
    NotBinary,
    #[error("no row or column of positive marginal mass remains")]
    DegenerateSupport,
    #[error("no feasible channel found for beta={beta} within {max_evals} evaluations")]
    OptimizerBudgetExceeded { beta: f64, max_evals: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
