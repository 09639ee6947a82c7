use thiserror::Error;

/// Failures raised by the physical models and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} out of domain: {value} ({reason})")]
    Domain {
        quantity: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "target {target_tbps} Tb/s not bracketed: {low_tbps} Tb/s at {low_dbm} dBm, \
         {high_tbps} Tb/s at {high_dbm} dBm"
    )]
    NotBracketed {
        target_tbps: f64,
        low_dbm: f64,
        low_tbps: f64,
        high_dbm: f64,
        high_tbps: f64,
    },

    #[error("target {target_tbps} Tb/s exceeds the zero-gap Shannon throughput {ceiling_tbps} Tb/s")]
    AboveShannon { target_tbps: f64, ceiling_tbps: f64 },

    #[error("bisection did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("grid cell ({row}, {col}) is not finite")]
    NonFiniteCell { row: usize, col: usize },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            quantity,
            value,
            reason,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that mean "no operating point meets the target".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::NotBracketed { .. } | Error::AboveShannon { .. } | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
