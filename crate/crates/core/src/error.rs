use thiserror::Error;

/// Errors raised by the Gompertz-Pareto toolkit.
///
/// Every variant maps onto a stable, machine-readable code (see [`GpdError::code`])
/// which the command-line front end reports on failure.
#[derive(Debug, Error)]
pub enum GpdError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Pareto exponent alpha = {0} must exceed 1 for the mean income to converge")]
    Divergent(f64),

    #[error("normalized income must be non-negative, got {0}")]
    NegativeIncome(f64),

    #[error("argument {value} outside the admissible range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("adaptive quadrature did not converge (error estimate {estimate:e} above tolerance {tolerance:e})")]
    NoConvergence { estimate: f64, tolerance: f64 },

    #[error("input contains no data")]
    EmptyInput,

    #[error("sample must contain at least {required} values, got {got}")]
    TooFewValues { required: usize, got: usize },

    #[error("total income is zero")]
    ZeroIncome,

    #[error("line {line}: cannot parse `{content}`")]
    MalformedLine { line: usize, content: String },

    #[error("binned CCDF is not strictly monotone between ({x0}, {f0}) and ({x1}, {f1})")]
    NonMonotone { x0: f64, f0: f64, x1: f64, f1: f64 },

    #[error("degenerate regression: {0}")]
    Degenerate(&'static str),

    #[error("insufficient points for regression: need {required}, have {got}")]
    InsufficientPoints { required: usize, got: usize },

    #[error("fit failed: {0}")]
    FitFailed(String),

    #[error("unknown year {0} in reference table")]
    UnknownYear(i32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GpdError {
    /// Stable kebab-case identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            GpdError::InvalidParameter { .. } => "invalid-parameter",
            GpdError::Divergent(_) => "divergent",
            GpdError::NegativeIncome(_) => "negative-income",
            GpdError::OutOfRange { .. } => "out-of-range",
            GpdError::NoConvergence { .. } => "no-convergence",
            GpdError::EmptyInput => "empty-input",
            GpdError::TooFewValues { .. } => "too-few-values",
            GpdError::ZeroIncome => "zero-income",
            GpdError::MalformedLine { .. } => "malformed-line",
            GpdError::NonMonotone { .. } => "non-monotone",
            GpdError::Degenerate(_) => "degenerate-regression",
            GpdError::InsufficientPoints { .. } => "insufficient-points",
            GpdError::FitFailed(_) => "fit-failed",
            GpdError::UnknownYear(_) => "unknown-year",
            GpdError::Io(_) => "io",
            GpdError::Csv(_) => "csv",
            GpdError::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, GpdError>;
