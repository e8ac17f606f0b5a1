use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter c must be positive, got {0}")]
    NonPositiveExponent(f64),

    #[error("evaluation point |z| = {0} is not inside the unit disk")]
    OutsideDisk(f64),

    #[error("boundary sample {index} is {value}, expected a positive value")]
    NonPositiveSample { index: usize, value: f64 },

    #[error("boundary sample {index} is {value}, expected a nonnegative value")]
    NegativeSample { index: usize, value: f64 },

    #[error("grid size {0} must be a power of two and at least 8")]
    BadGridSize(usize),

    #[error("polynomial degree {degree} exceeds available symbol order {order}")]
    InsufficientOrder { degree: usize, order: usize },

    #[error("Pythagorean residual {residual:e} exceeds tolerance {tolerance:e}")]
    PythagoreanResidual { residual: f64, tolerance: f64 },

    #[error("exponent p = {0} is below 2; H^p is never contained in H(b)")]
    ExponentBelowTwo(f64),

    #[error("level t = {0} must lie in (0, 1)")]
    BadLevel(f64),

    #[error("density is undefined at z = 1")]
    SingularPoint,

    #[error("invalid dyadic square (n = {n}, k = {k})")]
    BadSquare { n: u32, k: i64 },

    #[error("moment integral does not converge for n = {0}")]
    DivergentMoment(u32),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
