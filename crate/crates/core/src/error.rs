//! Error types shared by every module of the crate.
//!
//! The variants follow the failure taxonomy of the library surface:
//!
//! * [`Error::Domain`] — an argument lies outside an operation's
//!   mathematical domain (non-positive Bessel argument, chart point beyond
//!   the coordinate patch, region that leaks out of the chart, …).  These
//!   are caller errors and are always detectable before any numerics run.
//! * [`Error::Numeric`] — an iterative scheme failed to reach its stated
//!   tolerance (adaptive quadrature hit its subdivision cap, a Richardson
//!   tableau never plateaued).  The best available estimate and its error
//!   bound are carried so callers can still inspect the partial result.
//! * [`Error::Overflow`] — a quantity kept in log domain internally could
//!   not be exponentiated back into `f64` range; the log-domain value is
//!   reported.
//! * [`Error::UnsupportedLimit`] — the requested Newtonian-limit operation
//!   is undefined for the given spacetime (de Sitter and anti-de Sitter
//!   have no Newtonian analog).
//! * [`Error::Model`] — a model-level hypothesis is violated (potential not
//!   superstable along a sampling run, certificate preconditions missing).

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for the library surface.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Iterative numerics failed to converge to the requested tolerance.
    #[error("numeric error: {message} (best estimate {best_estimate:e}, error bound {error_bound:e})")]
    Numeric {
        message: String,
        /// Best available estimate at the point of failure.
        best_estimate: f64,
        /// Estimated absolute error of `best_estimate`.
        error_bound: f64,
    },

    /// A log-domain value exceeded the exponentiable range of `f64`.
    #[error("overflow: {message} (log-domain value {log_value})")]
    Overflow { message: String, log_value: f64 },

    /// The spacetime admits no Newtonian analog for the requested operation.
    #[error("unsupported limit: {0}")]
    UnsupportedLimit(String),

    /// A model-level hypothesis (superstability, certificate precondition)
    /// is violated.
    #[error("model error: {0}")]
    Model(String),
}

impl Error {
    /// Shorthand constructor for [`Error::Domain`].
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    /// Shorthand constructor for [`Error::Numeric`].
    pub fn numeric(message: impl Into<String>, best_estimate: f64, error_bound: f64) -> Self {
        Error::Numeric {
            message: message.into(),
            best_estimate,
            error_bound,
        }
    }

    /// Shorthand constructor for [`Error::Overflow`].
    pub fn overflow(message: impl Into<String>, log_value: f64) -> Self {
        Error::Overflow {
            message: message.into(),
            log_value,
        }
    }

    /// Shorthand constructor for [`Error::UnsupportedLimit`].
    pub fn unsupported_limit(message: impl Into<String>) -> Self {
        Error::UnsupportedLimit(message.into())
    }

    /// Shorthand constructor for [`Error::Model`].
    pub fn model(message: impl Into<String>) -> Self {
        Error::Model(message.into())
    }
}
