use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{field} out of {range}: got {value}")]
    OutOfRange {
        field: &'static str,
        range: &'static str,
        value: f64,
    },

    #[error("{what}: argument {value} outside domain {domain}")]
    Domain {
        what: &'static str,
        domain: &'static str,
        value: f64,
    },

    #[error("covariance is singular (determinant {det:e})")]
    Singular { det: f64 },

    #[error("covariance is not positive semidefinite (min eigenvalue {min_eigenvalue:e}, trace {trace:e})")]
    NotPsd { min_eigenvalue: f64, trace: f64 },

    #[error("covariance label mismatch: {0}")]
    LabelMismatch(String),

    #[error("run needs {requested} samples but the budget is {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },

    #[error("log-MGF is not convex at s = {s} (second derivative {mu_ddot:e})")]
    NonConvex { s: f64, mu_ddot: f64 },

    #[error("no solution found: {0}")]
    NotFound(String),

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Errors that come from bad user input rather than from I/O or numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange { .. } | Error::Domain { .. } | Error::Json(_) | Error::Incompatible(_)
        )
    }
}
