use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial division leaves a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("hbar exponent {exponent} falls below the window floor {lo}")]
    WindowUnderflow { exponent: i64, lo: i64 },
    #[error("size {size} exceeds the configured bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("character value for {lambda} at class {mu} is not an integer")]
    NonIntegerEntry { lambda: String, mu: String },
    #[error("series logarithm needs constant term exactly 1")]
    BadConstantTerm,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("request out of bounds: {0}")]
    OutOfBounds(String),
    #[error("Riemann-Hurwitz count {0} is odd")]
    NonIntegerGenus(i64),
    #[error("enumeration needs {required} steps, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
