use thiserror::Error;

/// Errors raised while building quantum objects or evaluating skew information and bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is not Hermitian (max |A - A†| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    NotTrace1(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNormExceeded(f64),

    #[error("Kraus operators are not complete (max |Σ K†K - I| = {0:e})")]
    IncompleteKraus(f64),

    #[error("channel needs at least one Kraus operator")]
    EmptyChannel,

    #[error("matrix is not unitary (max |U†U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("alpha must lie in the open interval (0, 1), got {0}")]
    AlphaOutOfRange(f64),

    #[error("Morozova-Chentsov function undefined at ({x:e}, {y:e})")]
    DomainError { x: f64, y: f64 },

    #[error("Morozova-Chentsov function is not positive at ({x}, {y}): {value}")]
    NonPositiveResult { x: f64, y: f64, value: f64 },

    #[error("custom Morozova-Chentsov function rejected: {0}")]
    InvalidCustomFunction(String),

    #[error("at least 2 observables are required, got {0}")]
    TooFewObservables(usize),

    #[error("at least {needed} channels are required, got {got}")]
    TooFewChannels { needed: usize, got: usize },

    #[error("at least {needed} unitaries are required, got {got}")]
    TooFewUnitaries { needed: usize, got: usize },

    #[error("permutation search needs {needed} assignments, limit is {limit}")]
    PermutationBudgetExceeded { needed: u128, limit: u128 },

    #[error("bound ordering violated: {stronger} = {stronger_value} < {weaker} = {weaker_value}")]
    OrderingViolation { stronger: String, stronger_value: f64, weaker: String, weaker_value: f64 },

    #[error("missing bound in report: {0}")]
    MissingBound(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors caused by the request itself rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::AlphaOutOfRange(_)
                | Error::InvalidCustomFunction(_)
                | Error::TooFewObservables(_)
                | Error::TooFewChannels { .. }
                | Error::TooFewUnitaries { .. }
                | Error::PermutationBudgetExceeded { .. }
        )
    }
}
