use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("degenerate channel draw: primary-link gain of user {user} is zero")]
    DegenerateDraw { user: usize },

    #[error(
        "{what} count {count} exceeds the closed-form enumeration cap of {cap}; \
         use the Monte-Carlo estimator instead"
    )]
    CapacityExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("closed form unavailable: {0}; use the Monte-Carlo estimator instead")]
    ModelAssumption(String),

    #[error("closed-form evaluation left [0, 1] by {deviation:e}")]
    PrecisionLoss { deviation: f64 },

    #[error(
        "quadrature did not converge: estimated error {achieved:e} above requested {requested:e}"
    )]
    NonConvergence { achieved: f64, requested: f64 },

    #[error("invalid MER grid: {0}")]
    InvalidGrid(String),

    #[error("outage floor {ln_value:.3} (natural log) underflows at MER {mer:e}; shrink the grid")]
    FloorUnderflow { mer: f64, ln_value: f64 },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field,
            reason: reason.into(),
        }
    }
}
