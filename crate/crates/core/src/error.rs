use thiserror::Error;

/// Errors raised while building chains, evaluating divergences or solving
/// maximum relative divergence problems.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate chain label {label:?} at index {index}")]
    DuplicateLabel { label: String, index: usize },

    #[error("a chain needs at least 2 elements, got {0}")]
    ChainTooShort(usize),

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error(
        "values must strictly increase: value at index {index} ({value}) is not above {previous}"
    )]
    NotIncreasing {
        index: usize,
        previous: f64,
        value: f64,
    },

    #[error("negative entry at index {index}: {value}")]
    Negative { index: usize, value: f64 },

    #[error("non-positive reference increment at index {index}: {value}")]
    NonPositiveReference { index: usize, value: f64 },

    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("not normalized (expected sum 1): sum={sum}")]
    NotNormalized { sum: f64 },

    #[error("probability {name}={value} outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("x={x} outside the feasible interval [{lo}, {hi}]")]
    OutsideInterval { x: f64, lo: f64, hi: f64 },

    #[error("x={x} is not strictly inside ({lo}, {hi}); the derivative diverges there")]
    NotInterior { x: f64, lo: f64, hi: f64 },

    #[error("infeasible point: template {template}, increment ending at node {node} is {value}")]
    InfeasiblePoint {
        template: usize,
        node: usize,
        value: f64,
    },

    #[error("gradient undefined: template {template}, increment ending at node {node} is {value}")]
    Boundary {
        template: usize,
        node: usize,
        value: f64,
    },

    #[error("empty feasible region: parameter {param} has bounds [{lo}, {hi}]")]
    EmptyRegion { param: usize, lo: f64, hi: f64 },

    #[error("no feasible value for parameter {param} with the other parameters fixed")]
    EmptyLine { param: usize },

    #[error(
        "objective is not concave along parameter {param} (second difference {second_difference})"
    )]
    NonConcave {
        param: usize,
        second_difference: f64,
    },

    #[error("problem: {0}")]
    InvalidProblem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
