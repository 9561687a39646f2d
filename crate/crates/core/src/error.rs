use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("arity mismatch for `{name}` at byte {offset}: {message}")]
    Arity {
        name: String,
        offset: usize,
        message: String,
    },

    #[error("domain error: {op} undefined at {arg}")]
    Domain { op: &'static str, arg: f64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("overflow: non-finite intermediate value")]
    Overflow,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("duplicate interpolation nodes")]
    DuplicateNodes,

    #[error("no convergence: best estimate {best} with error estimate {err_estimate}")]
    NoConvergence { best: f64, err_estimate: f64 },

    #[error("cannot classify function: {0}")]
    Unclassifiable(String),

    #[error("asymptotic constant not available for `{0}`")]
    MissingSigma(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
