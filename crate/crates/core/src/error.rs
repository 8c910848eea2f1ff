use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("operation requires {expected} orientation")]
    OrientationMismatch { expected: &'static str },

    #[error("unsupported Taylor order {0} (supported: 1, 3, 5)")]
    UnsupportedOrder(u32),

    #[error("Hill derivative is singular at x = 0 for non-integer coefficient (behaves like x^{exponent})")]
    HillSingularity { exponent: f64 },

    #[error("closed-form Hill antiderivative only exists for coefficient 1 or 2, got {0}")]
    UnsupportedCoefficient(f64),

    #[error("critical point undefined for zero weight")]
    ZeroWeight,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("edge source {index} out of range for a network of {genes} genes")]
    SourceOutOfRange { index: usize, genes: usize },

    #[error("network has delayed edges; use the delay integrator")]
    DelayedNetwork,

    #[error("network has no delayed edges")]
    NotDelayed,

    #[error("operation requires logistic edges only ({0})")]
    NonLogisticEdge(&'static str),

    #[error("network has no genes")]
    EmptyNetwork,

    #[error("state is not finite at t = {t}")]
    NonFinite { t: f64 },

    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("step budget of {steps} steps exhausted at t = {t}")]
    StepBudget { t: f64, steps: usize },

    #[error("history covers [{start}, {end}] but the lookback reaches back to {needed}")]
    HistoryTooShort { start: f64, end: f64, needed: f64 },

    #[error("delay {delay} is below 1e-12 * t_end; integrate as an ODE instead")]
    DegenerateDelay { delay: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian at iterate {iteration}")]
    SingularJacobian { iteration: usize },

    #[error("no bistable band: lambda*theta = {product} does not exceed 2")]
    NoBistableBand { product: f64 },

    #[error("Hill coefficient {0} <= 1 admits no saddle-node tangency")]
    NoTangency(f64),

    #[error("least-squares fit diverged: {0}")]
    Divergence(String),

    #[error("invariant box is unbounded: {0}")]
    UnboundedBox(String),

    #[error("model file: {0}")]
    Model(String),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }

    /// Whether the error comes from bad input rather than a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Domain { .. }
                | Error::OrientationMismatch { .. }
                | Error::UnsupportedOrder(_)
                | Error::UnsupportedCoefficient(_)
                | Error::ZeroWeight
                | Error::DimensionMismatch { .. }
                | Error::SourceOutOfRange { .. }
                | Error::Model(_)
                | Error::Json(_)
                | Error::Csv(_)
                | Error::Io(_)
        )
    }
}
