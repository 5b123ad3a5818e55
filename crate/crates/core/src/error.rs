use thiserror::Error;

/// Errors raised across the decoding stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element has multiplicative order {order}, need at least {needed}")]
    OrderTooSmall { order: u64, needed: u64 },
    #[error("polynomial degree {degree} is not below the bound {bound}")]
    DegreeTooHigh { degree: usize, bound: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cannot corrupt {errors} of {len} symbols")]
    TooManyErrors { errors: usize, len: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("epsilon must lie strictly between 0 and the distance {delta}, got {eps}")]
    BadEpsilon { eps: String, delta: String },
    #[error("subspaces are not expressed over the same ambient basis")]
    AmbientMismatch,
    #[error("enumeration needs {needed} points but the budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("interpolation parameters infeasible: {0}")]
    ParamsInfeasible(String),
    #[error("degenerate linear system: {0}")]
    DegenerateSystem(String),
    #[error("requested dimension {requested} is below the affine span dimension {span}")]
    DimensionTooSmall { span: usize, requested: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error at line {line}, field `{field}`: {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
