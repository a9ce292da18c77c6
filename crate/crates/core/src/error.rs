use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input `{name}`: {reason}")]
    InvalidInput { name: &'static str, reason: String },

    #[error("parse error at row {row}, column {column}: {reason}")]
    Parse {
        row: usize,
        column: String,
        reason: String,
    },

    /// Raised when a formula is evaluated outside its stated domain of validity.
    #[error("outside validity domain of {formula}: {reason}")]
    ValidityDomain {
        formula: &'static str,
        reason: String,
    },

    #[error("power curve is singular: cut-in speed equals rated speed ({0} m/s)")]
    SingularCurve(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("generator matrix is invalid: {0}")]
    InvalidGenerator(String),

    #[error("step size underflow at t = {time} h (largest |diagonal| = {max_diagonal:e} 1/h)")]
    Stiffness { time: f64, max_diagonal: f64 },

    #[error("generator has {classes} recurrent classes; stationary distribution is not unique")]
    MultipleRecurrentClasses { classes: usize },

    #[error("no samples fall inside the peak window")]
    EmptyWindow,

    #[error("LCOE undefined: total discounted energy is zero")]
    UndefinedLcoe,

    #[error("{quantity}: {source}")]
    Context {
        quantity: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            name,
            reason: reason.into(),
        }
    }

    /// Wraps the error with the name of the quantity being computed.
    pub fn context(self, quantity: impl Into<String>) -> Self {
        Error::Context {
            quantity: quantity.into(),
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
