use thiserror::Error;

/// Errors shared across the operator, propagator and oracle layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: operator expects {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("dense conversion refused: dimension {dim} exceeds cap {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },

    #[error("argument out of range: |z| = {magnitude:.3e} exceeds guard {guard:.1}")]
    ArgumentOutOfRange { magnitude: f64, guard: f64 },

    #[error(
        "series radius exceeded: term growth reached e^{actual:.1} against a safety envelope \
         of e^{radius:.1}; split the interval with substep_propagate"
    )]
    RadiusExceeded { actual: f64, radius: f64 },

    #[error(
        "series did not converge within {max_terms} terms (last term {last_term:.3e}, \
         partial sum norm {sum_norm:.3e})"
    )]
    NoConvergence {
        max_terms: usize,
        last_term: f64,
        sum_norm: f64,
    },

    #[error("wrong problem order: expected {expected}, got {actual}")]
    WrongOrder { expected: usize, actual: usize },

    #[error("unsupported operator representation for this operation: {0}")]
    UnsupportedRepresentation(&'static str),

    #[error("grid mismatch between inputs")]
    GridMismatch,

    #[error("mode {mode} is aliased on an n = {n} grid")]
    AliasedMode { mode: i64, n: usize },

    #[error("integration produced a non-finite state at step {step}")]
    IntegrationDiverged { step: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
